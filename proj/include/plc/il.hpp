#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plc/core.hpp"

namespace plc::il {

enum class Opcode {
  Ld, Ldn,
  St, Stn, Set, Reset,                    // Set/Reset print as S/R
  And, Andn, Or, Orn, Xor, Xorn, Not,
  Add, Sub, Mul, Div,
  Gt, Ge, Eq, Ne, Le, Lt,
  Jmp, Jmpc, Jmpcn,
  Ret, Nop,
  CloseParen,                             // ")" pseudo-instruction
};

const char* mnemonic(Opcode op);

// The "(": the instruction defers its operation until the matching ")".
bool paren_allowed(Opcode op);

struct Operand {
  std::variant<VarId, Value> v;

  static Operand var(VarId name) { return Operand{std::move(name)}; }
  static Operand constant(Value value) { return Operand{std::move(value)}; }

  bool is_var() const { return std::holds_alternative<VarId>(v); }
  const VarId& var_id() const { return std::get<VarId>(v); }
  const Value& value() const { return std::get<Value>(v); }

  bool operator==(const Operand&) const = default;
};

struct Instr {
  Opcode op = Opcode::Nop;
  std::optional<Operand> arg;   // data operand
  std::string target;           // jump label, Jmp/Jmpc/Jmpcn only
  bool paren = false;           // deferred "(" form; operand optional then

  bool operator==(const Instr&) const = default;
};

struct Line {
  std::optional<std::string> label;
  Instr instr;

  bool operator==(const Line&) const = default;
};

struct Program {
  std::vector<VarDecl> decls;
  std::vector<Line> lines;
  std::map<std::string, size_t> labels;  // label -> instruction index

  bool operator==(const Program&) const = default;
};

// Machine state of the accumulator semantics. cr is the current result;
// defer holds one frame per open paren.
struct DeferFrame {
  Opcode op = Opcode::And;
  bool negate = false;  // N-suffixed paren form
  Value saved;          // cr at the "("

  bool operator==(const DeferFrame&) const = default;
};

struct State {
  Value cr;  // Bool FALSE at program entry
  Environment env;
  size_t pc = 0;
  std::vector<DeferFrame> defer;
};

inline constexpr long kDefaultFuel = 1'000'000;

// Text format: optional VAR / VAR_INPUT / VAR_OUTPUT ... END_VAR header
// (one "name : TYPE [:= literal] ;" per entry), then one instruction per
// line with an optional "LABEL:" prefix. "(* ... *)" comments anywhere.
Program parse(const std::string& text);

// Instruction sequence only (no header, no labels, no jumps) — the form
// SFC action bodies use.
std::vector<Instr> parse_fragment(const std::string& text);

std::string print(const Program& prog);
std::string print_instr(const Instr& instr);
std::string print_fragment(const std::vector<Instr>& instrs);

// Structural well-formedness: label/jump integrity, operand arity, paren
// balance and nesting (jumps may not cross paren depth).
void validate(const Program& prog);

// Assemble a program from parts, rebuilding the label index; validates.
Program make_program(std::vector<VarDecl> decls, std::vector<Line> lines);

bool halted(const Program& prog, const State& st);

// Apply exactly one instruction. Deterministic; throws TypeError /
// DivisionByZero / UndeclaredVariable / TypeMismatch on faults.
State step(const Program& prog, State st);

// Run from pc = 0, cr = Bool FALSE until halt or RET; FuelExhausted when
// more than `fuel` steps would be needed (backward jumps may loop).
Environment run(const Program& prog, Environment env, long fuel = kDefaultFuel);

}  // namespace plc::il
