#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plc/il.hpp"
#include "plc/ld.hpp"
#include "plc/sfc.hpp"

namespace plc::checker {

using System = std::variant<il::Program, ld::Program, sfc::Model>;

bool is_sfc(const System& sys);
const std::vector<VarDecl>& system_decls(const System& sys);

// SFC bookkeeping carried alongside the environment (absent for IL/LD).
struct SfcControl {
  std::set<std::string> active;
  std::set<std::string> latched;
  std::set<std::string> just_activated;

  bool operator==(const SfcControl&) const = default;
};

struct SysState {
  Environment env;
  std::optional<SfcControl> sfc;

  bool operator==(const SysState&) const = default;
};

struct Property {
  std::string name;
  sfc::Guard invariant;

  bool operator==(const Property&) const = default;
};

// {"name": "...", "invariant": <guard object>}
Property parse_property(const std::string& json_text);
std::string print_property(const Property& prop);

// Atoms must reference declared BOOL variables; StepActive atoms require
// an SFC system and existing steps.
void validate_property(const System& sys, const Property& prop);

using InputAssignment = std::map<VarId, Value>;

// One entry per scan cycle. A null inputs field marks the initial state
// itself (used by depth-0 counterexamples); it may only appear first.
struct TraceStep {
  std::optional<InputAssignment> inputs;
  SysState post;
};

using Trace = std::vector<TraceStep>;

SysState initial_state(const System& sys);

// Write the inputs (exactly the INPUT-kind variables), execute one pass of
// the system's semantics, return the post state.
SysState scan_cycle(const System& sys, const InputAssignment& inputs, SysState st,
                    long fuel = il::kDefaultFuel);

bool satisfies(const Property& prop, const SysState& st);

// Canonical serialization of the observable state; two states with equal
// keys are future-equivalent (just_activated is recomputed by every evolve
// before use, so it is excluded).
std::string state_key(const SysState& st);

class InputDomain {
public:
  static InputDomain all_bool();
  static InputDomain explicit_list(std::vector<InputAssignment> assignments);

  // Assignments in deterministic order (all-bool: lexicographic over
  // name-sorted input variables, FALSE < TRUE).
  std::vector<InputAssignment> assignments_for(const System& sys) const;

private:
  bool all_bool_ = true;
  std::vector<InputAssignment> explicit_;
};

struct Limits {
  uint64_t max_states = 1'000'000;  // visited-set cap; StateExplosion beyond
};

inline constexpr int kDefaultDepth = 1000;

struct BoundedVerdict {
  bool holds = true;
  uint64_t states_visited = 0;
  int depth_reached = 0;
  bool exhausted = false;  // full reachable set explored before the bound
  std::optional<Trace> counterexample;  // shortest by BFS construction
};

// Breadth-first exploration from the initial state, every frontier state
// expanded with every input assignment in the domain; the initial state is
// checked at depth 0.
BoundedVerdict check_bounded(const System& sys, const Property& prop, int depth,
                             const InputDomain& domain = InputDomain::all_bool(),
                             const Limits& limits = Limits{});

struct InductiveVerdict {
  bool inductive = true;
  // Witness: a property-satisfying state with a one-step successor that
  // violates the property (not necessarily reachable). Null inputs mean
  // the base case failed: the witness is the initial state itself.
  std::optional<SysState> witness_state;
  std::optional<InputAssignment> witness_inputs;
  uint64_t states_checked = 0;
};

// Base: the initial state satisfies prop. Step: every property-satisfying
// state (all BOOL assignments; SFC step sets and latch sets bounded by
// model structure) keeps prop through every input assignment. Inductive
// implies safe at every depth; NotInductive does not imply reachable
// failure.
InductiveVerdict check_inductive(const System& sys, const Property& prop,
                                 const Limits& limits = Limits{});

struct ReplayVerdict {
  bool confirmed = false;
  std::optional<size_t> step;  // first diverging/failing index when refuted
  std::string detail;
};

// Re-execute the trace's inputs from the initial state, comparing each
// recomputed post state with the recorded one; the final state must
// violate the property.
ReplayVerdict replay(const System& sys, const Property& prop, const Trace& trace);

}  // namespace plc::checker
