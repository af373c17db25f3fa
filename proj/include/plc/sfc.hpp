#pragma once

#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "plc/il.hpp"

namespace plc::sfc {

// Guard language for transitions (and for safety properties): boolean
// combinations of variable atoms and step-activity atoms.
struct Guard {
  enum class Kind { True, False, Var, StepActive, Not, And, Or };

  Kind kind = Kind::True;
  std::string name;             // Var: variable name; StepActive: step id
  std::vector<Guard> children;  // Not: 1 child; And/Or: 2 children

  static Guard constant(bool b);
  static Guard var(VarId v);
  static Guard step_active(std::string step_id);
  static Guard negate(Guard g);
  static Guard conj(Guard a, Guard b);
  static Guard disj(Guard a, Guard b);

  bool operator==(const Guard&) const = default;
};

Guard guard_from_json(const nlohmann::json& j);
nlohmann::json guard_to_json(const Guard& g);

// N runs the body every cycle the step is active; S/R latch/unlatch the
// action; P runs the body only on the activation cycle.
enum class Qualifier { N, S, R, P };

const char* to_string(Qualifier q);

struct ActionBinding {
  Qualifier qualifier = Qualifier::N;
  std::string action;

  bool operator==(const ActionBinding&) const = default;
};

struct Step {
  std::string id;
  bool initial = false;
  std::vector<ActionBinding> actions;

  bool operator==(const Step&) const = default;
};

struct Transition {
  std::string id;
  std::set<std::string> sources;  // nonempty
  std::set<std::string> targets;  // nonempty
  Guard guard;
  int priority = 0;  // unique among transitions sharing any source step

  bool operator==(const Transition&) const = default;
};

// Straight-line IL fragment sharing the model's declarations; no jumps.
struct Action {
  std::string id;
  std::vector<il::Instr> body;

  bool operator==(const Action&) const = default;
};

struct Model {
  std::vector<VarDecl> decls;
  std::vector<Step> steps;
  std::vector<Transition> transitions;
  std::vector<Action> actions;

  const Step* find_step(const std::string& id) const;
  const Action* find_action(const std::string& id) const;
  const std::string& initial_step() const;

  bool operator==(const Model&) const = default;
};

struct State {
  std::set<std::string> active;
  Environment env;
  std::set<std::string> latched;         // actions stored via S, not yet R-released
  std::set<std::string> just_activated;  // steps entered by the last evolve

  bool operator==(const State&) const = default;
};

// .sfc.json document (see docs/formats.md).
Model load(const std::string& json_text);
std::string print(const Model& model);

void validate(const Model& model);

State init_state(const Model& model);

bool eval_guard(const Guard& g, const State& st);

// Guard evaluation against raw parts; also used by the property checker.
bool eval_guard_over(const Guard& g, const Environment& env, const std::set<std::string>& active);

// Transitions whose sources are all active and whose guard holds, ordered
// by (priority, id).
std::vector<const Transition*> enabled_transitions(const Model& model, const State& st);

// One evolution: fire a maximal conflict-free set of enabled transitions
// (greedy in priority order, a transition is skipped when an earlier
// selection consumed one of its sources), all simultaneously; then execute
// the actions of the resulting active steps.
State evolve(const Model& model, State st);

// Qualifier pass over active steps in id order, then every latched action
// body, in id order. Bodies run on the shared environment via il::run.
State execute_actions(const Model& model, State st);

}  // namespace plc::sfc
