#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plc/errors.hpp"

namespace plc {

enum class Type { Bool, Int };

const char* to_string(Type type);

// Identifier of a PLC variable; case-sensitive, [A-Za-z_][A-Za-z0-9_]*.
using VarId = std::string;

bool is_valid_identifier(const std::string& name);

// Runtime value: a truth value or a 32-bit two's-complement integer.
// There is no implicit conversion between the two domains.
class Value {
public:
  Value() : v_(false) {}

  static Value boolean(bool b) { return Value(b); }
  static Value integer(int32_t n) { return Value(n); }

  Type type() const { return std::holds_alternative<bool>(v_) ? Type::Bool : Type::Int; }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<int32_t>(v_); }

  // Throw TypeError when the value is not of the requested domain.
  bool as_bool() const;
  int32_t as_int() const;

  bool operator==(const Value&) const = default;

private:
  explicit Value(bool b) : v_(b) {}
  explicit Value(int32_t n) : v_(n) {}

  std::variant<bool, int32_t> v_;
};

// "TRUE", "FALSE", or the decimal integer.
std::string to_string(const Value& value);

Value default_value(Type type);

// Integer arithmetic wraps modulo 2^32.
int32_t wrap_add(int32_t a, int32_t b);
int32_t wrap_sub(int32_t a, int32_t b);
int32_t wrap_mul(int32_t a, int32_t b);
int32_t wrap_div(int32_t a, int32_t b);  // DivisionByZero on b == 0; INT_MIN/-1 wraps to INT_MIN

enum class VarKind { Input, Output, Local };

const char* to_string(VarKind kind);

struct VarDecl {
  VarId name;
  Type type = Type::Bool;
  VarKind kind = VarKind::Local;
  std::optional<Value> init;

  bool operator==(const VarDecl&) const = default;
};

// Total map from declared variables to values. Copying is cheap: the
// declaration layout is shared, only the value slots are duplicated.
class Environment {
public:
  Environment() = default;

  const Value& read(const VarId& name) const;          // UndeclaredVariable
  void set(const VarId& name, const Value& value);     // UndeclaredVariable / TypeMismatch
  bool declared(const VarId& name) const;

  const std::vector<VarDecl>& decls() const;
  const VarDecl& decl_of(const VarId& name) const;

  // Bindings in name order (deterministic enumeration order).
  std::vector<std::pair<VarId, Value>> bindings() const;

  size_t size() const;

  // Same declared-variable set and identical values.
  bool operator==(const Environment& other) const;

  friend Environment init_env(const std::vector<VarDecl>& decls);

private:
  struct Layout {
    std::vector<VarDecl> decls;          // declaration order
    std::map<VarId, size_t> index;       // name -> slot, name-sorted iteration
  };

  std::shared_ptr<const Layout> layout_;
  std::vector<Value> slots_;
};

// Bind every declared variable to its init value or the type default
// (BOOL -> FALSE, INT -> 0). DuplicateDeclaration on repeated names.
Environment init_env(const std::vector<VarDecl>& decls);

Value read(const Environment& env, const VarId& name);

// Functional update: returns a copy of env with name bound to value.
Environment write(Environment env, const VarId& name, const Value& value);

// Names of BOOL variables (optionally restricted to one kind), name-sorted.
std::vector<VarId> bool_var_names(const std::vector<VarDecl>& decls);
std::vector<VarId> var_names_of_kind(const std::vector<VarDecl>& decls, VarKind kind);

// Overwrite the listed BOOL variables from the bits of `assignment`:
// vars[0] takes the most significant of the |vars| low bits, so counting
// from 0 upward enumerates assignments in lexicographic (name, FALSE<TRUE)
// order.
void assign_bool_bits(Environment& env, const std::vector<VarId>& vars, uint64_t assignment);

}  // namespace plc
