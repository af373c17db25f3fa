#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "plc/checker.hpp"
#include "plc/il.hpp"
#include "plc/ld.hpp"
#include "plc/sfc.hpp"

// Seeded random generators for programs, systems and properties. All
// generators are deterministic functions of the Rng state.
namespace plctest {

class Rng {
public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  int range(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_) < p; }
  uint64_t bits() { return engine_(); }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<size_t>(range(0, static_cast<int>(xs.size()) - 1))];
  }

private:
  std::mt19937_64 engine_;
};

// ------------------------------------------------------------ LD programs

struct LdGenOptions {
  int max_vars = 8;      // BOOL variables in total
  int max_depth = 4;     // network nesting depth
  int max_rungs = 5;
  bool latching_coils = true;  // allow SET/RESET modes
};

plc::ld::Network gen_network(Rng& rng, const std::vector<plc::VarId>& vars, int depth);
plc::ld::Program gen_ld_program(Rng& rng, const LdGenOptions& opts = {});

// ------------------------------------------------- integer expressions

struct Expr {
  enum class Kind { Const, Var, Add, Sub, Mul, Div };
  Kind kind = Kind::Const;
  int32_t value = 0;
  std::string var;
  std::unique_ptr<Expr> lhs, rhs;
};

// Leaves are constants or INT variables from `vars`.
std::unique_ptr<Expr> gen_int_expr(Rng& rng, const std::vector<plc::VarId>& vars, int depth);

// Straight-line IL leaving the expression value in cr; composite right
// operands use the deferred paren form (with and without the inline
// operand).
std::vector<plc::il::Instr> compile_expr(const Expr& e);

// ------------------------------------------------------------- systems

struct SystemGenOptions {
  int max_bool_vars = 10;  // total across kinds
  int max_inputs = 4;
};

plc::checker::System gen_system(Rng& rng, const SystemGenOptions& opts = {});
plc::il::Program gen_il_system(Rng& rng, const SystemGenOptions& opts = {});
plc::sfc::Model gen_sfc_system(Rng& rng);

// Random property over the system's BOOL variables (and steps for SFC).
plc::checker::Property gen_property(Rng& rng, const plc::checker::System& sys);

// ------------------------------------------------------------ mutations

enum class MutationKind { AndOrFlip, NegateFlip, StoreTargetSwap };

struct Mutant {
  plc::il::Program program;
  MutationKind kind;
  size_t line;
  std::string description;
};

// Single-instruction mutation of the given kind at a random applicable
// site; nullopt when the program has no applicable site.
std::optional<Mutant> mutate(const plc::il::Program& prog, MutationKind kind, Rng& rng);

}  // namespace plctest
