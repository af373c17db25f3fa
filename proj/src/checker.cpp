#include "plc/checker.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "plc/json_util.hpp"

namespace plc::checker {

using nlohmann::json;

bool is_sfc(const System& sys) {
  return std::holds_alternative<sfc::Model>(sys);
}

const std::vector<VarDecl>& system_decls(const System& sys) {
  return std::visit([](const auto& s) -> const std::vector<VarDecl>& { return s.decls; }, sys);
}

Property parse_property(const std::string& json_text) {
  json doc = jutil::parse_document(json_text);
  jutil::allow_keys(doc, {"name", "invariant"}, "property");
  Property prop;
  prop.name = jutil::req_string(doc, "name", "property");
  if (!doc.contains("invariant")) throw Error(ErrorKind::SyntaxError, "property: missing field 'invariant'");
  prop.invariant = sfc::guard_from_json(doc.at("invariant"));
  return prop;
}

std::string print_property(const Property& prop) {
  json doc;
  doc["name"] = prop.name;
  doc["invariant"] = sfc::guard_to_json(prop.invariant);
  return doc.dump(2) + "\n";
}

namespace {

void check_property_guard(const sfc::Guard& g, const System& sys, const Environment& env) {
  using Kind = sfc::Guard::Kind;
  switch (g.kind) {
    case Kind::True:
    case Kind::False:
      return;
    case Kind::Var:
      if (!env.declared(g.name)) throw Error(ErrorKind::UndeclaredVariable, "property atom: " + g.name);
      if (env.decl_of(g.name).type != Type::Bool)
        throw Error(ErrorKind::TypeMismatch, "property atom on non-BOOL variable '" + g.name + "'");
      return;
    case Kind::StepActive: {
      const auto* model = std::get_if<sfc::Model>(&sys);
      if (!model)
        throw Error(ErrorKind::UnsupportedDomain, "StepActive atom '" + g.name + "' on a non-SFC system");
      if (!model->find_step(g.name))
        throw Error(ErrorKind::DanglingReference, "property references step '" + g.name + "'");
      return;
    }
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
      for (const sfc::Guard& c : g.children) check_property_guard(c, sys, env);
      return;
  }
}

const std::set<std::string> kNoSteps;

}  // namespace

void validate_property(const System& sys, const Property& prop) {
  Environment env = init_env(system_decls(sys));
  check_property_guard(prop.invariant, sys, env);
}

SysState initial_state(const System& sys) {
  SysState st;
  st.env = init_env(system_decls(sys));
  if (const auto* model = std::get_if<sfc::Model>(&sys)) {
    sfc::State s = sfc::init_state(*model);
    st.sfc = SfcControl{std::move(s.active), std::move(s.latched), std::move(s.just_activated)};
  }
  return st;
}

SysState scan_cycle(const System& sys, const InputAssignment& inputs, SysState st, long fuel) {
  const std::vector<VarDecl>& decls = system_decls(sys);
  size_t input_count = 0;
  for (const VarDecl& d : decls) {
    if (d.kind != VarKind::Input) continue;
    ++input_count;
    if (!inputs.count(d.name))
      throw Error(ErrorKind::DeclarationMismatch, "input assignment missing '" + d.name + "'");
  }
  if (inputs.size() != input_count) {
    for (const auto& [name, value] : inputs) {
      if (!st.env.declared(name) || st.env.decl_of(name).kind != VarKind::Input)
        throw Error(ErrorKind::DeclarationMismatch, "'" + name + "' is not an INPUT variable");
    }
  }
  for (const auto& [name, value] : inputs) st.env.set(name, value);

  if (const auto* prog = std::get_if<il::Program>(&sys)) {
    st.env = il::run(*prog, std::move(st.env), fuel);
  } else if (const auto* prog = std::get_if<ld::Program>(&sys)) {
    st.env = ld::eval(*prog, std::move(st.env));
  } else {
    const auto& model = std::get<sfc::Model>(sys);
    sfc::State s;
    s.active = std::move(st.sfc->active);
    s.latched = std::move(st.sfc->latched);
    s.just_activated = std::move(st.sfc->just_activated);
    s.env = std::move(st.env);
    s = sfc::evolve(model, std::move(s));
    st.env = std::move(s.env);
    st.sfc = SfcControl{std::move(s.active), std::move(s.latched), std::move(s.just_activated)};
  }
  return st;
}

bool satisfies(const Property& prop, const SysState& st) {
  const std::set<std::string>& active = st.sfc ? st.sfc->active : kNoSteps;
  return sfc::eval_guard_over(prop.invariant, st.env, active);
}

std::string state_key(const SysState& st) {
  std::string key;
  for (const auto& [name, value] : st.env.bindings()) {
    key += name;
    key += '=';
    key += to_string(value);
    key += ';';
  }
  if (st.sfc) {
    key += "|A:";
    for (const std::string& s : st.sfc->active) {
      key += s;
      key += ',';
    }
    key += "|L:";
    for (const std::string& s : st.sfc->latched) {
      key += s;
      key += ',';
    }
    // just_activated is recomputed by every evolve before it is read, so
    // states differing only there are future-equivalent.
  }
  return key;
}

InputDomain InputDomain::all_bool() {
  return InputDomain{};
}

InputDomain InputDomain::explicit_list(std::vector<InputAssignment> assignments) {
  InputDomain d;
  d.all_bool_ = false;
  d.explicit_ = std::move(assignments);
  return d;
}

std::vector<InputAssignment> InputDomain::assignments_for(const System& sys) const {
  if (!all_bool_) return explicit_;
  const std::vector<VarDecl>& decls = system_decls(sys);
  std::vector<VarId> inputs;
  for (const VarDecl& d : decls) {
    if (d.kind != VarKind::Input) continue;
    if (d.type != Type::Bool)
      throw Error(ErrorKind::UnsupportedDomain,
                  "all-bool input domain requires BOOL inputs; '" + d.name + "' is INT");
    inputs.push_back(d.name);
  }
  std::sort(inputs.begin(), inputs.end());
  if (inputs.size() > 20)
    throw Error(ErrorKind::StateExplosion,
                "all-bool input domain over " + std::to_string(inputs.size()) + " inputs");
  const size_t k = inputs.size();
  std::vector<InputAssignment> out;
  out.reserve(size_t{1} << k);
  for (uint64_t bits = 0; bits < (uint64_t{1} << k); ++bits) {
    InputAssignment ia;
    for (size_t i = 0; i < k; ++i) ia[inputs[i]] = Value::boolean((bits >> (k - 1 - i)) & 1u);
    out.push_back(std::move(ia));
  }
  return out;
}

BoundedVerdict check_bounded(const System& sys, const Property& prop, int depth,
                             const InputDomain& domain, const Limits& limits) {
  validate_property(sys, prop);
  if (depth < 0) throw Error(ErrorKind::UnsupportedDomain, "negative depth");
  const std::vector<InputAssignment> inputs = domain.assignments_for(sys);

  struct Node {
    SysState state;
    int64_t parent;  // -1 for the initial state
    std::optional<InputAssignment> via;
    int depth;
  };

  BoundedVerdict verdict;
  SysState init = initial_state(sys);

  std::vector<Node> nodes;
  std::unordered_set<std::string> visited;
  visited.insert(state_key(init));

  auto build_trace = [&](int64_t node_index) {
    Trace trace;
    for (int64_t i = node_index; i >= 0; i = nodes[i].parent) {
      if (nodes[i].parent < 0 && !nodes[i].via) {
        // Initial state: only part of the trace for depth-0 violations.
        if (trace.empty()) trace.push_back(TraceStep{std::nullopt, nodes[i].state});
        break;
      }
      trace.push_back(TraceStep{nodes[i].via, nodes[i].state});
    }
    std::reverse(trace.begin(), trace.end());
    return trace;
  };

  nodes.push_back(Node{init, -1, std::nullopt, 0});
  if (!satisfies(prop, init)) {
    verdict.holds = false;
    verdict.states_visited = 1;
    verdict.depth_reached = 0;
    verdict.counterexample = build_trace(0);
    return verdict;
  }

  int max_depth_seen = 0;
  for (size_t head = 0; head < nodes.size(); ++head) {
    // nodes may reallocate while expanding; index, don't hold references
    const int node_depth = nodes[head].depth;
    max_depth_seen = std::max(max_depth_seen, node_depth);
    if (node_depth >= depth) continue;
    for (const InputAssignment& ia : inputs) {
      SysState succ = scan_cycle(sys, ia, nodes[head].state);
      std::string key = state_key(succ);
      if (visited.count(key)) continue;
      if (visited.size() >= limits.max_states)
        throw Error(ErrorKind::StateExplosion,
                    "visited-state cap " + std::to_string(limits.max_states) + " exceeded");
      visited.insert(std::move(key));
      nodes.push_back(Node{std::move(succ), static_cast<int64_t>(head), ia, node_depth + 1});
      const Node& added = nodes.back();
      if (!satisfies(prop, added.state)) {
        verdict.holds = false;
        verdict.states_visited = visited.size();
        verdict.depth_reached = added.depth;
        verdict.counterexample = build_trace(static_cast<int64_t>(nodes.size()) - 1);
        return verdict;
      }
    }
  }

  verdict.holds = true;
  verdict.states_visited = visited.size();
  verdict.exhausted = max_depth_seen < depth;
  verdict.depth_reached = verdict.exhausted ? max_depth_seen : depth;
  return verdict;
}

namespace {

// Maximum simultaneously active steps derivable from the chart structure:
// token count can only grow through a transition with more targets than
// sources.
size_t structural_step_bound(const sfc::Model& model) {
  for (const sfc::Transition& t : model.transitions)
    if (t.targets.size() > t.sources.size()) return model.steps.size();
  return 1;
}

std::vector<std::string> s_qualified_actions(const sfc::Model& model) {
  std::set<std::string> ids;
  for (const sfc::Step& s : model.steps)
    for (const sfc::ActionBinding& ab : s.actions)
      if (ab.qualifier == sfc::Qualifier::S) ids.insert(ab.action);
  return {ids.begin(), ids.end()};
}

}  // namespace

InductiveVerdict check_inductive(const System& sys, const Property& prop, const Limits& limits) {
  validate_property(sys, prop);
  const std::vector<VarDecl>& decls = system_decls(sys);
  for (const VarDecl& d : decls) {
    if (d.type != Type::Bool)
      throw Error(ErrorKind::UnsupportedDomain,
                  "inductive check requires an all-BOOL state space; '" + d.name + "' is INT");
  }

  std::vector<VarId> input_vars = var_names_of_kind(decls, VarKind::Input);
  std::vector<VarId> state_vars;
  for (const VarDecl& d : decls)
    if (d.kind != VarKind::Input) state_vars.push_back(d.name);
  std::sort(state_vars.begin(), state_vars.end());
  if (state_vars.size() > 25 || input_vars.size() > 20)
    throw Error(ErrorKind::StateExplosion,
                "inductive enumeration over " + std::to_string(state_vars.size()) + " state and " +
                    std::to_string(input_vars.size()) + " input variables");

  InductiveVerdict verdict;

  SysState init = initial_state(sys);
  if (!satisfies(prop, init)) {
    verdict.inductive = false;
    verdict.witness_state = std::move(init);
    verdict.witness_inputs = std::nullopt;  // base case
    return verdict;
  }

  // Enumerate SFC control parts (a single empty placeholder otherwise).
  struct Control {
    std::optional<SfcControl> sfc;
  };
  std::vector<Control> controls;
  if (const auto* model = std::get_if<sfc::Model>(&sys)) {
    const size_t n = model->steps.size();
    const size_t bound = structural_step_bound(*model);
    if (n > 20) throw Error(ErrorKind::StateExplosion, "too many steps to enumerate");
    std::vector<std::string> latchable = s_qualified_actions(*model);
    for (uint64_t mask = 1; mask < (uint64_t{1} << n); ++mask) {
      if (static_cast<size_t>(__builtin_popcountll(mask)) > bound) continue;
      SfcControl ctrl;
      for (size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1u) ctrl.active.insert(model->steps[i].id);
      for (uint64_t lmask = 0; lmask < (uint64_t{1} << latchable.size()); ++lmask) {
        SfcControl c = ctrl;
        for (size_t i = 0; i < latchable.size(); ++i)
          if ((lmask >> i) & 1u) c.latched.insert(latchable[i]);
        controls.push_back(Control{std::move(c)});
      }
    }
  } else {
    controls.push_back(Control{std::nullopt});
  }

  const uint64_t state_combos = uint64_t{1} << state_vars.size();
  const uint64_t input_combos = uint64_t{1} << input_vars.size();
  {
    // Upfront explosion guard on the number of scans in the worst case.
    long double total = static_cast<long double>(controls.size()) *
                        static_cast<long double>(state_combos) *
                        static_cast<long double>(input_combos);
    if (total > static_cast<long double>(limits.max_states))
      throw Error(ErrorKind::StateExplosion,
                  "inductive enumeration would exceed " + std::to_string(limits.max_states) + " scans");
  }

  const Environment base_env = init_env(decls);
  const std::vector<InputAssignment> input_assignments = InputDomain::all_bool().assignments_for(sys);

  for (const Control& ctrl : controls) {
    for (uint64_t sbits = 0; sbits < state_combos; ++sbits) {
      SysState pre;
      pre.env = base_env;
      assign_bool_bits(pre.env, state_vars, sbits);
      pre.sfc = ctrl.sfc;

      // The post state does not depend on the pre-state's input values, so
      // a pre-state "satisfies prop" when SOME input valuation does.
      bool possible = false;
      for (uint64_t ibits = 0; ibits < input_combos; ++ibits) {
        assign_bool_bits(pre.env, input_vars, ibits);
        if (satisfies(prop, pre)) {
          possible = true;
          break;
        }
      }
      if (!possible) continue;

      for (const InputAssignment& ia : input_assignments) {
        SysState post = scan_cycle(sys, ia, pre);
        ++verdict.states_checked;
        if (!satisfies(prop, post)) {
          verdict.inductive = false;
          verdict.witness_state = std::move(pre);
          verdict.witness_inputs = ia;
          return verdict;
        }
      }
    }
  }
  return verdict;
}

ReplayVerdict replay(const System& sys, const Property& prop, const Trace& trace) {
  if (trace.empty()) return ReplayVerdict{false, std::nullopt, "empty trace"};
  SysState state = initial_state(sys);
  for (size_t i = 0; i < trace.size(); ++i) {
    const TraceStep& step = trace[i];
    if (!step.inputs) {
      if (i != 0)
        return ReplayVerdict{false, i, "null inputs entry past the start of the trace"};
      // Initial-state entry: no scan executed.
    } else {
      try {
        state = scan_cycle(sys, *step.inputs, std::move(state));
      } catch (const Error& e) {
        return ReplayVerdict{false, i, std::string("scan failed: ") + e.what()};
      }
    }
    if (state_key(state) != state_key(step.post)) {
      return ReplayVerdict{false, i,
                           "state mismatch: expected " + state_key(step.post) + ", got " + state_key(state)};
    }
  }
  if (satisfies(prop, state))
    return ReplayVerdict{false, trace.size(), "final state satisfies property '" + prop.name + "'"};
  return ReplayVerdict{true, std::nullopt, ""};
}

}  // namespace plc::checker
