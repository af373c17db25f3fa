#include "plc/core.hpp"

#include <algorithm>

namespace plc {

const char* to_string(Type type) {
  return type == Type::Bool ? "BOOL" : "INT";
}

const char* to_string(VarKind kind) {
  switch (kind) {
    case VarKind::Input: return "INPUT";
    case VarKind::Output: return "OUTPUT";
    case VarKind::Local: return "LOCAL";
  }
  return "?";
}

bool is_valid_identifier(const std::string& name) {
  if (name.empty()) return false;
  auto first = [](char c) { return c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto rest = [&](char c) { return first(c) || (c >= '0' && c <= '9'); };
  if (!first(name[0])) return false;
  return std::all_of(name.begin() + 1, name.end(), rest);
}

bool Value::as_bool() const {
  if (!is_bool()) throw Error(ErrorKind::TypeError, "expected BOOL, got INT " + std::to_string(std::get<int32_t>(v_)));
  return std::get<bool>(v_);
}

int32_t Value::as_int() const {
  if (!is_int()) throw Error(ErrorKind::TypeError, std::string("expected INT, got BOOL ") + (std::get<bool>(v_) ? "TRUE" : "FALSE"));
  return std::get<int32_t>(v_);
}

std::string to_string(const Value& value) {
  if (value.is_bool()) return value.as_bool() ? "TRUE" : "FALSE";
  return std::to_string(value.as_int());
}

Value default_value(Type type) {
  return type == Type::Bool ? Value::boolean(false) : Value::integer(0);
}

int32_t wrap_add(int32_t a, int32_t b) {
  return static_cast<int32_t>(static_cast<uint32_t>(a) + static_cast<uint32_t>(b));
}

int32_t wrap_sub(int32_t a, int32_t b) {
  return static_cast<int32_t>(static_cast<uint32_t>(a) - static_cast<uint32_t>(b));
}

int32_t wrap_mul(int32_t a, int32_t b) {
  return static_cast<int32_t>(static_cast<uint32_t>(a) * static_cast<uint32_t>(b));
}

int32_t wrap_div(int32_t a, int32_t b) {
  if (b == 0) throw Error(ErrorKind::DivisionByZero, std::to_string(a) + " DIV 0");
  if (a == INT32_MIN && b == -1) return INT32_MIN;  // the only overflowing quotient
  return a / b;
}

const Value& Environment::read(const VarId& name) const {
  if (!layout_) throw Error(ErrorKind::UndeclaredVariable, name);
  auto it = layout_->index.find(name);
  if (it == layout_->index.end()) throw Error(ErrorKind::UndeclaredVariable, name);
  return slots_[it->second];
}

void Environment::set(const VarId& name, const Value& value) {
  if (!layout_) throw Error(ErrorKind::UndeclaredVariable, name);
  auto it = layout_->index.find(name);
  if (it == layout_->index.end()) throw Error(ErrorKind::UndeclaredVariable, name);
  if (layout_->decls[it->second].type != value.type()) {
    throw Error(ErrorKind::TypeMismatch,
                name + " is " + to_string(layout_->decls[it->second].type) + ", cannot assign " +
                    to_string(value.type()) + " value " + to_string(value));
  }
  slots_[it->second] = value;
}

bool Environment::declared(const VarId& name) const {
  return layout_ && layout_->index.count(name) > 0;
}

const std::vector<VarDecl>& Environment::decls() const {
  static const std::vector<VarDecl> empty;
  return layout_ ? layout_->decls : empty;
}

const VarDecl& Environment::decl_of(const VarId& name) const {
  if (!layout_) throw Error(ErrorKind::UndeclaredVariable, name);
  auto it = layout_->index.find(name);
  if (it == layout_->index.end()) throw Error(ErrorKind::UndeclaredVariable, name);
  return layout_->decls[it->second];
}

std::vector<std::pair<VarId, Value>> Environment::bindings() const {
  std::vector<std::pair<VarId, Value>> out;
  if (!layout_) return out;
  out.reserve(slots_.size());
  for (const auto& [name, slot] : layout_->index) out.emplace_back(name, slots_[slot]);
  return out;
}

size_t Environment::size() const { return slots_.size(); }

bool Environment::operator==(const Environment& other) const {
  if (layout_ == other.layout_) return slots_ == other.slots_;
  return bindings() == other.bindings();
}

Environment init_env(const std::vector<VarDecl>& decls) {
  auto layout = std::make_shared<Environment::Layout>();
  layout->decls = decls;
  for (size_t i = 0; i < decls.size(); ++i) {
    const VarDecl& d = decls[i];
    if (!is_valid_identifier(d.name)) {
      throw Error(ErrorKind::SyntaxError, "invalid variable name '" + d.name + "'");
    }
    if (!layout->index.emplace(d.name, i).second) {
      throw Error(ErrorKind::DuplicateDeclaration, d.name);
    }
    if (d.init && d.init->type() != d.type) {
      throw Error(ErrorKind::TypeMismatch,
                  d.name + " declared " + to_string(d.type) + " but initialized with " + to_string(*d.init));
    }
  }
  Environment env;
  env.layout_ = std::move(layout);
  env.slots_.reserve(decls.size());
  for (const VarDecl& d : decls) env.slots_.push_back(d.init ? *d.init : default_value(d.type));
  return env;
}

Value read(const Environment& env, const VarId& name) { return env.read(name); }

Environment write(Environment env, const VarId& name, const Value& value) {
  env.set(name, value);
  return env;
}

std::vector<VarId> bool_var_names(const std::vector<VarDecl>& decls) {
  std::vector<VarId> names;
  for (const VarDecl& d : decls)
    if (d.type == Type::Bool) names.push_back(d.name);
  std::sort(names.begin(), names.end());
  return names;
}

std::vector<VarId> var_names_of_kind(const std::vector<VarDecl>& decls, VarKind kind) {
  std::vector<VarId> names;
  for (const VarDecl& d : decls)
    if (d.kind == kind) names.push_back(d.name);
  std::sort(names.begin(), names.end());
  return names;
}

void assign_bool_bits(Environment& env, const std::vector<VarId>& vars, uint64_t assignment) {
  const size_t k = vars.size();
  for (size_t i = 0; i < k; ++i) {
    bool bit = (assignment >> (k - 1 - i)) & 1u;
    env.set(vars[i], Value::boolean(bit));
  }
}

}  // namespace plc
