#include "plc/sfc.hpp"

#include <algorithm>
#include <map>

#include "plc/json_util.hpp"

namespace plc::sfc {

using nlohmann::json;

Guard Guard::constant(bool b) {
  Guard g;
  g.kind = b ? Kind::True : Kind::False;
  return g;
}

Guard Guard::var(VarId v) {
  Guard g;
  g.kind = Kind::Var;
  g.name = std::move(v);
  return g;
}

Guard Guard::step_active(std::string step_id) {
  Guard g;
  g.kind = Kind::StepActive;
  g.name = std::move(step_id);
  return g;
}

Guard Guard::negate(Guard inner) {
  Guard g;
  g.kind = Kind::Not;
  g.children.push_back(std::move(inner));
  return g;
}

Guard Guard::conj(Guard a, Guard b) {
  Guard g;
  g.kind = Kind::And;
  g.children.push_back(std::move(a));
  g.children.push_back(std::move(b));
  return g;
}

Guard Guard::disj(Guard a, Guard b) {
  Guard g;
  g.kind = Kind::Or;
  g.children.push_back(std::move(a));
  g.children.push_back(std::move(b));
  return g;
}

Guard guard_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::SyntaxError, "guard must be an object");
  std::string kind = jutil::req_string(j, "kind", "guard");
  if (kind == "true") {
    jutil::allow_keys(j, {"kind"}, "guard");
    return Guard::constant(true);
  }
  if (kind == "false") {
    jutil::allow_keys(j, {"kind"}, "guard");
    return Guard::constant(false);
  }
  if (kind == "var") {
    jutil::allow_keys(j, {"kind", "name"}, "guard");
    return Guard::var(jutil::req_string(j, "name", "var guard"));
  }
  if (kind == "active") {
    jutil::allow_keys(j, {"kind", "step"}, "guard");
    return Guard::step_active(jutil::req_string(j, "step", "active guard"));
  }
  if (kind == "not") {
    jutil::allow_keys(j, {"kind", "arg"}, "guard");
    if (!j.contains("arg")) throw Error(ErrorKind::SyntaxError, "not guard: missing 'arg'");
    return Guard::negate(guard_from_json(j.at("arg")));
  }
  if (kind == "and" || kind == "or") {
    jutil::allow_keys(j, {"kind", "left", "right"}, "guard");
    if (!j.contains("left") || !j.contains("right"))
      throw Error(ErrorKind::SyntaxError, kind + " guard: missing 'left' or 'right'");
    Guard l = guard_from_json(j.at("left"));
    Guard r = guard_from_json(j.at("right"));
    return kind == "and" ? Guard::conj(std::move(l), std::move(r))
                         : Guard::disj(std::move(l), std::move(r));
  }
  throw Error(ErrorKind::SyntaxError, "unknown guard kind '" + kind + "'");
}

json guard_to_json(const Guard& g) {
  json j;
  switch (g.kind) {
    case Guard::Kind::True: j["kind"] = "true"; break;
    case Guard::Kind::False: j["kind"] = "false"; break;
    case Guard::Kind::Var:
      j["kind"] = "var";
      j["name"] = g.name;
      break;
    case Guard::Kind::StepActive:
      j["kind"] = "active";
      j["step"] = g.name;
      break;
    case Guard::Kind::Not:
      j["kind"] = "not";
      j["arg"] = guard_to_json(g.children[0]);
      break;
    case Guard::Kind::And:
    case Guard::Kind::Or:
      j["kind"] = g.kind == Guard::Kind::And ? "and" : "or";
      j["left"] = guard_to_json(g.children[0]);
      j["right"] = guard_to_json(g.children[1]);
      break;
  }
  return j;
}

const char* to_string(Qualifier q) {
  switch (q) {
    case Qualifier::N: return "N";
    case Qualifier::S: return "S";
    case Qualifier::R: return "R";
    case Qualifier::P: return "P";
  }
  return "?";
}

const Step* Model::find_step(const std::string& id) const {
  for (const Step& s : steps)
    if (s.id == id) return &s;
  return nullptr;
}

const Action* Model::find_action(const std::string& id) const {
  for (const Action& a : actions)
    if (a.id == id) return &a;
  return nullptr;
}

const std::string& Model::initial_step() const {
  for (const Step& s : steps)
    if (s.initial) return s.id;
  throw Error(ErrorKind::NoInitialStep, "model has no initial step");
}

namespace {

Qualifier qualifier_from_string(const std::string& s) {
  if (s == "N") return Qualifier::N;
  if (s == "S") return Qualifier::S;
  if (s == "R") return Qualifier::R;
  if (s == "P") return Qualifier::P;
  throw Error(ErrorKind::SyntaxError, "unknown action qualifier '" + s + "'");
}

void check_guard(const Guard& g, const Model& model, const Environment& env, const char* where) {
  switch (g.kind) {
    case Guard::Kind::True:
    case Guard::Kind::False:
      return;
    case Guard::Kind::Var:
      if (!env.declared(g.name))
        throw Error(ErrorKind::UndeclaredVariable, std::string(where) + ": " + g.name);
      if (env.decl_of(g.name).type != Type::Bool)
        throw Error(ErrorKind::TypeMismatch,
                    std::string(where) + ": guard atom on non-BOOL variable '" + g.name + "'");
      return;
    case Guard::Kind::StepActive:
      if (!model.find_step(g.name))
        throw Error(ErrorKind::DanglingReference, std::string(where) + ": step '" + g.name + "'");
      return;
    case Guard::Kind::Not:
      if (g.children.size() != 1)
        throw Error(ErrorKind::SyntaxError, std::string(where) + ": 'not' takes exactly one child");
      check_guard(g.children[0], model, env, where);
      return;
    case Guard::Kind::And:
    case Guard::Kind::Or:
      if (g.children.size() != 2)
        throw Error(ErrorKind::SyntaxError, std::string(where) + ": binary guard takes exactly two children");
      check_guard(g.children[0], model, env, where);
      check_guard(g.children[1], model, env, where);
      return;
  }
}

}  // namespace

void validate(const Model& model) {
  Environment env = init_env(model.decls);

  std::set<std::string> step_ids;
  int initial_count = 0;
  for (const Step& s : model.steps) {
    if (!step_ids.insert(s.id).second)
      throw Error(ErrorKind::SyntaxError, "duplicate step id '" + s.id + "'");
    if (s.initial) ++initial_count;
  }
  if (initial_count == 0) throw Error(ErrorKind::NoInitialStep, "exactly one step must be initial");
  if (initial_count > 1) throw Error(ErrorKind::MultipleInitialSteps, std::to_string(initial_count) + " initial steps");

  std::set<std::string> action_ids;
  for (const Action& a : model.actions) {
    if (!action_ids.insert(a.id).second)
      throw Error(ErrorKind::SyntaxError, "duplicate action id '" + a.id + "'");
    for (const il::Instr& in : a.body) {
      if (in.op == il::Opcode::Jmp || in.op == il::Opcode::Jmpc || in.op == il::Opcode::Jmpcn)
        throw Error(ErrorKind::SyntaxError, "action '" + a.id + "' contains a jump");
    }
    // Arity/paren well-formedness of the fragment.
    std::vector<il::Line> lines;
    for (const il::Instr& in : a.body) lines.push_back(il::Line{std::nullopt, in});
    il::make_program(model.decls, std::move(lines));
  }

  for (const Step& s : model.steps) {
    for (const ActionBinding& ab : s.actions) {
      if (!action_ids.count(ab.action))
        throw Error(ErrorKind::DanglingReference, "step '" + s.id + "' references action '" + ab.action + "'");
    }
  }

  std::set<std::string> transition_ids;
  for (const Transition& t : model.transitions) {
    if (!transition_ids.insert(t.id).second)
      throw Error(ErrorKind::SyntaxError, "duplicate transition id '" + t.id + "'");
    if (t.sources.empty())
      throw Error(ErrorKind::SyntaxError, "transition '" + t.id + "' has no sources");
    if (t.targets.empty())
      throw Error(ErrorKind::SyntaxError, "transition '" + t.id + "' has no targets");
    for (const std::string& s : t.sources)
      if (!step_ids.count(s))
        throw Error(ErrorKind::DanglingReference, "transition '" + t.id + "' source '" + s + "'");
    for (const std::string& s : t.targets)
      if (!step_ids.count(s))
        throw Error(ErrorKind::DanglingReference, "transition '" + t.id + "' target '" + s + "'");
    check_guard(t.guard, model, env, ("transition '" + t.id + "'").c_str());
  }

  // Priorities resolve conflicts, so they must be unambiguous among
  // transitions that can compete for a source step.
  for (size_t i = 0; i < model.transitions.size(); ++i) {
    for (size_t j = i + 1; j < model.transitions.size(); ++j) {
      const Transition& a = model.transitions[i];
      const Transition& b = model.transitions[j];
      if (a.priority != b.priority) continue;
      bool share = std::any_of(a.sources.begin(), a.sources.end(),
                               [&](const std::string& s) { return b.sources.count(s) > 0; });
      if (share)
        throw Error(ErrorKind::AmbiguousPriority,
                    "transitions '" + a.id + "' and '" + b.id + "' share a source with equal priority " +
                        std::to_string(a.priority));
    }
  }
}

Model load(const std::string& json_text) {
  json doc = jutil::parse_document(json_text);
  jutil::allow_keys(doc, {"decls", "steps", "transitions", "actions"}, "sfc document");
  Model model;
  model.decls = jutil::decls_from_json(jutil::req_array(doc, "decls", "sfc document"));

  for (const json& sj : jutil::req_array(doc, "steps", "sfc document")) {
    if (!sj.is_object()) throw Error(ErrorKind::SyntaxError, "step must be an object");
    jutil::allow_keys(sj, {"id", "initial", "actions"}, "step");
    Step step;
    step.id = jutil::req_string(sj, "id", "step");
    if (sj.contains("initial")) step.initial = jutil::req_bool(sj, "initial", "step");
    if (sj.contains("actions")) {
      for (const json& aj : jutil::req_array(sj, "actions", "step")) {
        if (!aj.is_object()) throw Error(ErrorKind::SyntaxError, "action binding must be an object");
        jutil::allow_keys(aj, {"qualifier", "action"}, "action binding");
        ActionBinding ab;
        ab.qualifier = qualifier_from_string(jutil::req_string(aj, "qualifier", "action binding"));
        ab.action = jutil::req_string(aj, "action", "action binding");
        step.actions.push_back(std::move(ab));
      }
    }
    model.steps.push_back(std::move(step));
  }

  for (const json& tj : jutil::req_array(doc, "transitions", "sfc document")) {
    if (!tj.is_object()) throw Error(ErrorKind::SyntaxError, "transition must be an object");
    jutil::allow_keys(tj, {"id", "sources", "targets", "guard", "priority"}, "transition");
    Transition t;
    t.id = jutil::req_string(tj, "id", "transition");
    for (const json& s : jutil::req_array(tj, "sources", "transition")) {
      if (!s.is_string()) throw Error(ErrorKind::SyntaxError, "transition sources must be strings");
      t.sources.insert(s.get<std::string>());
    }
    for (const json& s : jutil::req_array(tj, "targets", "transition")) {
      if (!s.is_string()) throw Error(ErrorKind::SyntaxError, "transition targets must be strings");
      t.targets.insert(s.get<std::string>());
    }
    if (!tj.contains("guard")) throw Error(ErrorKind::SyntaxError, "transition missing 'guard'");
    t.guard = guard_from_json(tj.at("guard"));
    t.priority = static_cast<int>(jutil::req_int(tj, "priority", "transition"));
    model.transitions.push_back(std::move(t));
  }

  for (const json& aj : jutil::req_array(doc, "actions", "sfc document")) {
    if (!aj.is_object()) throw Error(ErrorKind::SyntaxError, "action must be an object");
    jutil::allow_keys(aj, {"id", "il"}, "action");
    Action a;
    a.id = jutil::req_string(aj, "id", "action");
    a.body = il::parse_fragment(jutil::req_string(aj, "il", "action"));
    model.actions.push_back(std::move(a));
  }

  validate(model);
  return model;
}

std::string print(const Model& model) {
  json doc;
  doc["decls"] = jutil::decls_to_json(model.decls);
  doc["steps"] = json::array();
  for (const Step& s : model.steps) {
    json sj;
    sj["id"] = s.id;
    sj["initial"] = s.initial;
    sj["actions"] = json::array();
    for (const ActionBinding& ab : s.actions)
      sj["actions"].push_back(json{{"qualifier", to_string(ab.qualifier)}, {"action", ab.action}});
    doc["steps"].push_back(std::move(sj));
  }
  doc["transitions"] = json::array();
  for (const Transition& t : model.transitions) {
    json tj;
    tj["id"] = t.id;
    tj["sources"] = json(t.sources);
    tj["targets"] = json(t.targets);
    tj["guard"] = guard_to_json(t.guard);
    tj["priority"] = t.priority;
    doc["transitions"].push_back(std::move(tj));
  }
  doc["actions"] = json::array();
  for (const Action& a : model.actions)
    doc["actions"].push_back(json{{"id", a.id}, {"il", il::print_fragment(a.body)}});
  return doc.dump(2) + "\n";
}

State init_state(const Model& model) {
  State st;
  st.env = init_env(model.decls);
  const std::string& initial = model.initial_step();
  st.active.insert(initial);
  st.just_activated.insert(initial);
  return st;
}

bool eval_guard_over(const Guard& g, const Environment& env, const std::set<std::string>& active) {
  switch (g.kind) {
    case Guard::Kind::True: return true;
    case Guard::Kind::False: return false;
    case Guard::Kind::Var: return env.read(g.name).as_bool();
    case Guard::Kind::StepActive: return active.count(g.name) > 0;
    case Guard::Kind::Not: return !eval_guard_over(g.children[0], env, active);
    case Guard::Kind::And:
      return eval_guard_over(g.children[0], env, active) && eval_guard_over(g.children[1], env, active);
    case Guard::Kind::Or:
      return eval_guard_over(g.children[0], env, active) || eval_guard_over(g.children[1], env, active);
  }
  return false;
}

bool eval_guard(const Guard& g, const State& st) {
  return eval_guard_over(g, st.env, st.active);
}

std::vector<const Transition*> enabled_transitions(const Model& model, const State& st) {
  std::vector<const Transition*> enabled;
  for (const Transition& t : model.transitions) {
    bool sources_active = std::all_of(t.sources.begin(), t.sources.end(),
                                      [&](const std::string& s) { return st.active.count(s) > 0; });
    if (sources_active && eval_guard(t.guard, st)) enabled.push_back(&t);
  }
  std::sort(enabled.begin(), enabled.end(), [](const Transition* a, const Transition* b) {
    if (a->priority != b->priority) return a->priority < b->priority;
    return a->id < b->id;
  });
  return enabled;
}

State execute_actions(const Model& model, State st) {
  // Active steps in id order; std::set iterates sorted already.
  std::vector<const Step*> active_steps;
  for (const std::string& id : st.active) {
    const Step* s = model.find_step(id);
    if (s) active_steps.push_back(s);
  }

  auto run_body = [&](const std::string& action_id) {
    const Action* a = model.find_action(action_id);
    if (!a) throw Error(ErrorKind::DanglingReference, "action '" + action_id + "'");
    // Bodies were validated when the model was built; assemble directly.
    il::Program body;
    body.decls = model.decls;
    body.lines.reserve(a->body.size());
    for (const il::Instr& in : a->body) body.lines.push_back(il::Line{std::nullopt, in});
    st.env = il::run(body, std::move(st.env));
  };

  for (const Step* s : active_steps) {
    for (const ActionBinding& ab : s->actions) {
      switch (ab.qualifier) {
        case Qualifier::N:
          run_body(ab.action);
          break;
        case Qualifier::S:
          st.latched.insert(ab.action);
          break;
        case Qualifier::R:
          st.latched.erase(ab.action);
          break;
        case Qualifier::P:
          if (st.just_activated.count(s->id)) run_body(ab.action);
          break;
      }
    }
  }
  for (const std::string& id : st.latched) run_body(id);
  return st;
}

State evolve(const Model& model, State st) {
  st.just_activated.clear();

  std::vector<const Transition*> enabled = enabled_transitions(model, st);

  // Greedy conflict resolution: a transition is skipped when an earlier
  // (higher-priority) selection already consumed one of its sources.
  std::set<std::string> consumed;
  std::vector<const Transition*> fired;
  for (const Transition* t : enabled) {
    bool clash = std::any_of(t->sources.begin(), t->sources.end(),
                             [&](const std::string& s) { return consumed.count(s) > 0; });
    if (clash) continue;
    fired.push_back(t);
    consumed.insert(t->sources.begin(), t->sources.end());
  }

  if (!fired.empty()) {
    std::set<std::string> remaining = st.active;
    for (const std::string& s : consumed) remaining.erase(s);
    std::set<std::string> next = remaining;
    for (const Transition* t : fired) next.insert(t->targets.begin(), t->targets.end());
    // Newly added, including re-entered steps whose token was consumed.
    for (const std::string& s : next)
      if (!remaining.count(s)) st.just_activated.insert(s);
    st.active = std::move(next);
  }

  return execute_actions(model, std::move(st));
}

}  // namespace plc::sfc
