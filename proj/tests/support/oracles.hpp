#pragma once

#include <bitset>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "generators.hpp"
#include "plc/checker.hpp"
#include "plc/ld.hpp"

// Reference implementations kept independent of the library paths they
// check: a recursive expression evaluator, a bitmask truth-table evaluator
// for contact networks, and a dense transition-relation reachability
// oracle.
namespace plctest {

// Wrapping 32-bit evaluation; nullopt when any division by zero occurs.
std::optional<int32_t> eval_expr(const Expr& e, const std::map<std::string, int32_t>& vars);

// Truth table over 2^k environments (k <= 8): bit e is the network value
// in the environment where variable i takes bit (k-1-i) of e — the same
// lexicographic order the library enumerates.
std::bitset<256> network_truth_table(const plc::ld::Network& net, const std::vector<plc::VarId>& vars);

struct ReachVerdict {
  bool violated = false;
  int violation_depth = -1;  // minimal number of cycles to a violating state
  size_t states_reached = 0;
};

// Enumerates the full (all-BOOL) state space of the system as dense
// indices, tabulates every scan transition, and runs layered reachability
// to `depth`. Requires small systems; throws when the space exceeds
// `max_space` states.
ReachVerdict reachability_oracle(const plc::checker::System& sys, const plc::checker::Property& prop,
                                 int depth, size_t max_space = 1 << 22);

// Uniformly random inputs each cycle; first cycle count at which the
// property is violated, or nullopt.
std::optional<int> random_walk_violation(const plc::checker::System& sys,
                                         const plc::checker::Property& prop, Rng& rng, int max_cycles);

}  // namespace plctest
