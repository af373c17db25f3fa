#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "plc/il.hpp"
#include "plc/ld.hpp"

namespace plc::ld2il {

// Emit an IL fragment that leaves eval_network(net, env) in cr for every
// environment. The first contact of the outermost chain becomes LD/LDN;
// composite non-first children use the deferred AND( / OR( form.
std::vector<il::Instr> compile_network(const ld::Network& net);

// Network code followed by one store per coil
// (NORMAL -> ST, NEGATED -> STN, SET -> S, RESET -> R).
std::vector<il::Instr> compile_rung(const ld::Rung& rung);

// Rung fragments concatenated in order; declarations copied verbatim.
il::Program compile(const ld::Program& prog);

struct ExhaustiveMode {};
struct RandomMode {
  uint64_t samples = 1000;
  uint64_t seed = 0;
};
using Mode = std::variant<ExhaustiveMode, RandomMode>;

struct Witness {
  Environment env;        // pre-scan assignment that distinguishes the two
  Environment ld_result;
  Environment il_result;
};

struct Verdict {
  bool equivalent = true;
  std::optional<Witness> witness;  // first mismatch in lexicographic order
  uint64_t envs_checked = 0;
};

// Differential oracle over BOOL input assignments (INT variables held at
// their declared defaults): eval_ld vs run_il compared as full
// environments. Exhaustive mode enumerates all 2^k assignments over the
// shared BOOL variables (k <= 20); DeclarationMismatch when the programs
// do not share a declaration list.
Verdict check_equivalence(const ld::Program& ld_prog, const il::Program& il_prog,
                          const Mode& mode = ExhaustiveMode{});

}  // namespace plc::ld2il
