#include "plc/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "plc/checker.hpp"
#include "plc/json_util.hpp"
#include "plc/ld2il.hpp"

namespace plc::cli {

namespace {

using checker::InputAssignment;
using checker::System;
using nlohmann::json;

enum class Format { Il, Ld, Sfc };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

Format detect_format(const std::string& path, const std::string& override_name) {
  if (override_name == "il") return Format::Il;
  if (override_name == "ld") return Format::Ld;
  if (override_name == "sfc") return Format::Sfc;
  if (!override_name.empty()) throw std::runtime_error("unknown format '" + override_name + "'");
  if (path.ends_with(".il")) return Format::Il;
  if (path.ends_with(".ld.json")) return Format::Ld;
  if (path.ends_with(".sfc.json")) return Format::Sfc;
  throw std::runtime_error("cannot infer format of '" + path + "' (use --format il|ld|sfc)");
}

System load_system(const std::string& path, const std::string& override_name) {
  std::string text = read_file(path);
  switch (detect_format(path, override_name)) {
    case Format::Il: return il::parse(text);
    case Format::Ld: return ld::parse(text);
    case Format::Sfc: return sfc::load(text);
  }
  throw std::runtime_error("unreachable");
}

Value parse_value_token(const std::string& tok) {
  if (tok == "TRUE") return Value::boolean(true);
  if (tok == "FALSE") return Value::boolean(false);
  try {
    size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos == tok.size() && v >= INT32_MIN && v <= INT32_MAX)
      return Value::integer(static_cast<int32_t>(v));
  } catch (const std::exception&) {
  }
  throw std::runtime_error("bad value '" + tok + "' (expected TRUE, FALSE, or a 32-bit integer)");
}

InputAssignment parse_inputs_option(const std::string& text) {
  InputAssignment out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bad --inputs entry '" + item + "' (want name=value)");
    out[item.substr(0, eq)] = parse_value_token(item.substr(eq + 1));
  }
  return out;
}

std::vector<InputAssignment> parse_inputs_file(const std::string& path) {
  json doc = jutil::parse_document(read_file(path));
  if (!doc.is_array()) throw std::runtime_error("inputs file must be a JSON array of objects");
  std::vector<InputAssignment> out;
  for (const json& entry : doc) {
    if (!entry.is_object()) throw std::runtime_error("inputs file entries must be objects");
    InputAssignment ia;
    for (const auto& item : entry.items()) {
      const json& v = item.value();
      if (v.is_boolean()) ia[item.key()] = Value::boolean(v.get<bool>());
      else if (v.is_number_integer()) ia[item.key()] = Value::integer(static_cast<int32_t>(v.get<int64_t>()));
      else throw std::runtime_error("inputs file: '" + item.key() + "' must be boolean or integer");
    }
    out.push_back(std::move(ia));
  }
  return out;
}

// ------------------------------------------------------------- formatting

void print_columns(std::ostream& out, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> width(header.size());
  for (size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
    for (size_t c = 0; c < row.size() && c < width.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  auto emit = [&](const std::vector<std::string>& cells) {
    for (size_t c = 0; c < cells.size(); ++c) {
      if (c) out << "  ";
      out << cells[c];
      if (c + 1 < cells.size()) out << std::string(width[c] - cells[c].size(), ' ');
    }
    out << "\n";
  };
  emit(header);
  std::vector<std::string> rule;
  for (size_t c = 0; c < header.size(); ++c) rule.push_back(std::string(width[c], '-'));
  emit(rule);
  for (const auto& row : rows) emit(row);
}

std::string active_steps_string(const checker::SysState& st) {
  if (!st.sfc) return "";
  std::string s;
  for (const std::string& id : st.sfc->active) {
    if (!s.empty()) s += " ";
    s += id;
  }
  return s;
}

void print_trace_table(std::ostream& out, const System& sys, const checker::Trace& trace) {
  const std::vector<VarDecl>& decls = checker::system_decls(sys);
  std::vector<VarId> input_names = var_names_of_kind(decls, VarKind::Input);
  std::vector<VarId> other_names;
  for (const VarDecl& d : decls)
    if (d.kind != VarKind::Input) other_names.push_back(d.name);
  std::sort(other_names.begin(), other_names.end());

  std::vector<std::string> header;
  header.push_back("cycle");
  for (const VarId& v : input_names) header.push_back(v);
  for (const VarId& v : other_names) header.push_back(v);
  if (checker::is_sfc(sys)) header.push_back("active");

  std::vector<std::vector<std::string>> rows;
  int cycle = 0;
  for (const checker::TraceStep& step : trace) {
    std::vector<std::string> row;
    if (step.inputs) ++cycle;
    row.push_back(step.inputs ? std::to_string(cycle) : "init");
    for (const VarId& v : input_names) {
      if (step.inputs && step.inputs->count(v)) row.push_back(to_string(step.inputs->at(v)));
      else row.push_back("-");
    }
    for (const VarId& v : other_names) row.push_back(to_string(step.post.env.read(v)));
    if (checker::is_sfc(sys)) row.push_back(active_steps_string(step.post));
    rows.push_back(std::move(row));
  }
  print_columns(out, header, rows);
}

json state_to_json(const checker::SysState& st) {
  json j;
  j["env"] = json::object();
  for (const auto& [name, value] : st.env.bindings()) j["env"][name] = jutil::value_to_json(value);
  if (st.sfc) {
    j["active"] = json(st.sfc->active);
    j["latched"] = json(st.sfc->latched);
  }
  return j;
}

json trace_to_json(const checker::Trace& trace) {
  json arr = json::array();
  for (const checker::TraceStep& step : trace) {
    json entry;
    if (step.inputs) {
      entry["inputs"] = json::object();
      for (const auto& [name, value] : *step.inputs) entry["inputs"][name] = jutil::value_to_json(value);
    } else {
      entry["inputs"] = nullptr;
    }
    entry["state"] = state_to_json(step.post);
    arr.push_back(std::move(entry));
  }
  return arr;
}

void print_state_assignments(std::ostream& out, const checker::SysState& st, const std::string& indent) {
  for (const auto& [name, value] : st.env.bindings())
    out << indent << name << " = " << to_string(value) << "\n";
  if (st.sfc) {
    out << indent << "active: " << active_steps_string(st) << "\n";
    if (!st.sfc->latched.empty()) {
      out << indent << "latched:";
      for (const std::string& a : st.sfc->latched) out << " " << a;
      out << "\n";
    }
  }
}

// ------------------------------------------------------------ subcommands

int cmd_parse(const std::string& path, const std::string& format, std::ostream& out) {
  std::string text = read_file(path);
  switch (detect_format(path, format)) {
    case Format::Il: out << il::print(il::parse(text)); break;
    case Format::Ld: out << ld::print(ld::parse(text)); break;
    case Format::Sfc: out << sfc::print(sfc::load(text)); break;
  }
  return 0;
}

int cmd_run(const std::string& path, const std::string& format, const std::string& inputs_text,
            long fuel, std::ostream& out) {
  System sys = load_system(path, format);
  InputAssignment inputs = parse_inputs_option(inputs_text);
  checker::SysState st = checker::scan_cycle(sys, inputs, checker::initial_state(sys), fuel);
  for (const VarId& name : var_names_of_kind(checker::system_decls(sys), VarKind::Output))
    out << name << " = " << to_string(st.env.read(name)) << "\n";
  if (st.sfc) out << "active: " << active_steps_string(st) << "\n";
  return 0;
}

int cmd_translate(const std::string& path, const std::string& out_path, std::ostream& out) {
  ld::Program prog = ld::parse(read_file(path));
  std::string text = il::print(ld2il::compile(prog));
  if (out_path.empty()) out << text;
  else write_file(out_path, text);
  return 0;
}

int cmd_equiv(const std::string& ld_path, const std::string& il_path, bool exhaustive,
              std::optional<uint64_t> random_n, uint64_t seed, std::ostream& out) {
  ld::Program ld_prog = ld::parse(read_file(ld_path));
  il::Program il_prog = il::parse(read_file(il_path));

  ld2il::Mode mode = ld2il::ExhaustiveMode{};
  if (random_n) {
    if (exhaustive) throw std::runtime_error("--exhaustive and --random are mutually exclusive");
    mode = ld2il::RandomMode{*random_n, seed};
    out << "seed: " << seed << "\n";
  }
  ld2il::Verdict verdict = ld2il::check_equivalence(ld_prog, il_prog, mode);
  if (verdict.equivalent) {
    out << "Equivalent (" << verdict.envs_checked << " environments)\n";
    return 0;
  }
  out << "NotEquivalent (after " << verdict.envs_checked << " environments)\n";
  const ld2il::Witness& w = *verdict.witness;
  std::vector<std::string> header = {"variable", "input", "ld", "il"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& [name, value] : w.env.bindings()) {
    rows.push_back({name, to_string(value), to_string(w.ld_result.read(name)),
                    to_string(w.il_result.read(name))});
  }
  print_columns(out, header, rows);
  return 1;
}

int cmd_simulate(const std::string& path, const std::string& format, int cycles,
                 const std::string& inputs_text, const std::string& inputs_file,
                 const std::string& json_out, long fuel, std::ostream& out) {
  System sys = load_system(path, format);
  std::vector<InputAssignment> per_cycle;
  if (!inputs_file.empty()) {
    if (!inputs_text.empty()) throw std::runtime_error("--inputs and --inputs-file are mutually exclusive");
    per_cycle = parse_inputs_file(inputs_file);
    if (cycles < 0) cycles = static_cast<int>(per_cycle.size());
    if (static_cast<size_t>(cycles) > per_cycle.size())
      throw std::runtime_error("--cycles exceeds entries in the inputs file");
  } else {
    if (cycles < 0) throw std::runtime_error("--cycles is required without --inputs-file");
    per_cycle.assign(cycles, parse_inputs_option(inputs_text));
  }

  checker::Trace trace;
  checker::SysState st = checker::initial_state(sys);
  trace.push_back(checker::TraceStep{std::nullopt, st});
  for (int i = 0; i < cycles; ++i) {
    st = checker::scan_cycle(sys, per_cycle[i], std::move(st), fuel);
    trace.push_back(checker::TraceStep{per_cycle[i], st});
  }
  print_trace_table(out, sys, trace);
  if (!json_out.empty()) {
    json doc;
    doc["cycles"] = trace_to_json(trace);
    write_file(json_out, doc.dump(2) + "\n");
  }
  return 0;
}

int cmd_check(const std::string& path, const std::string& format, const std::string& prop_path,
              int depth, bool inductive, uint64_t max_states, const std::string& json_out,
              std::ostream& out) {
  System sys = load_system(path, format);
  checker::Property prop = checker::parse_property(read_file(prop_path));
  checker::Limits limits;
  limits.max_states = max_states;

  json doc;
  doc["property"] = prop.name;
  int code = 0;

  if (inductive) {
    checker::InductiveVerdict verdict = checker::check_inductive(sys, prop, limits);
    if (verdict.inductive) {
      out << "property '" << prop.name << "' is INDUCTIVE (" << verdict.states_checked
          << " scans checked)\n";
      doc["verdict"] = "inductive";
    } else {
      out << "property '" << prop.name << "' is NOT INDUCTIVE\n";
      if (!verdict.witness_inputs) {
        out << "the initial state violates the property:\n";
      } else {
        out << "witness state (satisfies the property, successor does not; "
               "not necessarily reachable):\n";
      }
      print_state_assignments(out, *verdict.witness_state, "  ");
      if (verdict.witness_inputs) {
        out << "witness inputs:\n";
        for (const auto& [name, value] : *verdict.witness_inputs)
          out << "  " << name << " = " << to_string(value) << "\n";
      }
      doc["verdict"] = "not_inductive";
      doc["witness"] = state_to_json(*verdict.witness_state);
      code = 1;
    }
  } else {
    checker::BoundedVerdict verdict = checker::check_bounded(sys, prop, depth, checker::InputDomain::all_bool(), limits);
    doc["depth"] = depth;
    doc["states_visited"] = verdict.states_visited;
    if (verdict.holds) {
      out << "property '" << prop.name << "' HOLDS within depth " << depth << " ("
          << verdict.states_visited << " states visited";
      if (verdict.exhausted) out << ", reachable set exhausted at depth " << verdict.depth_reached;
      out << ")\n";
      doc["verdict"] = "holds";
      doc["exhausted"] = verdict.exhausted;
    } else {
      out << "property '" << prop.name << "' VIOLATED at depth " << verdict.depth_reached << "\n";
      print_trace_table(out, sys, *verdict.counterexample);
      doc["verdict"] = "counterexample";
      doc["trace"] = trace_to_json(*verdict.counterexample);
      code = 1;
    }
  }
  if (!json_out.empty()) write_file(json_out, doc.dump(2) + "\n");
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"PLC program toolkit: IL/LD/SFC semantics, LD->IL translation, "
               "differential equivalence, scan-cycle simulation, safety checking"};
  app.require_subcommand(1);

  // parse
  auto* p_parse = app.add_subcommand("parse", "validate a program file and pretty-print it");
  std::string parse_file, parse_format;
  p_parse->add_option("file", parse_file, "program file (.il, .ld.json, .sfc.json)")->required();
  p_parse->add_option("--format", parse_format, "override format detection (il|ld|sfc)");

  // run
  auto* p_run = app.add_subcommand("run", "execute one scan cycle and print the outputs");
  std::string run_file, run_format, run_inputs;
  long run_fuel = il::kDefaultFuel;
  p_run->add_option("file", run_file, "program file")->required();
  p_run->add_option("--format", run_format, "override format detection (il|ld|sfc)");
  p_run->add_option("--inputs", run_inputs, "input assignment, e.g. a=TRUE,n=5");
  p_run->add_option("--fuel", run_fuel, "IL step budget per scan");

  // translate
  auto* p_translate = app.add_subcommand("translate", "compile an LD program to IL");
  std::string tr_file, tr_out;
  p_translate->add_option("file", tr_file, "LD program (.ld.json)")->required();
  p_translate->add_option("-o,--output", tr_out, "output .il path (stdout when omitted)");

  // equiv
  auto* p_equiv = app.add_subcommand("equiv", "check an LD program and an IL program for equivalence");
  std::string eq_ld, eq_il;
  bool eq_exhaustive = false;
  std::optional<uint64_t> eq_random;
  uint64_t eq_seed = 0;
  p_equiv->add_option("ld_file", eq_ld, "LD program (.ld.json)")->required();
  p_equiv->add_option("il_file", eq_il, "IL program (.il)")->required();
  p_equiv->add_flag("--exhaustive", eq_exhaustive, "enumerate all BOOL assignments (default)");
  p_equiv->add_option("--random", eq_random, "check N random assignments instead");
  p_equiv->add_option("--seed", eq_seed, "seed for --random (default 0, always printed)");

  // simulate
  auto* p_sim = app.add_subcommand("simulate", "run scan cycles and print a trace table");
  std::string sim_file, sim_format, sim_inputs, sim_inputs_file, sim_json;
  int sim_cycles = -1;
  long sim_fuel = il::kDefaultFuel;
  p_sim->add_option("file", sim_file, "program file")->required();
  p_sim->add_option("--format", sim_format, "override format detection (il|ld|sfc)");
  p_sim->add_option("--cycles", sim_cycles, "number of scan cycles");
  p_sim->add_option("--inputs", sim_inputs, "fixed input assignment for every cycle");
  p_sim->add_option("--inputs-file", sim_inputs_file, "JSON array of per-cycle input objects");
  p_sim->add_option("--json-out", sim_json, "also write the trace as JSON");
  p_sim->add_option("--fuel", sim_fuel, "IL step budget per scan");

  // check
  auto* p_check = app.add_subcommand("check", "check a safety property (bounded BFS or inductive)");
  std::string chk_file, chk_format, chk_prop, chk_json;
  int chk_depth = checker::kDefaultDepth;
  bool chk_inductive = false;
  uint64_t chk_max_states = checker::Limits{}.max_states;
  p_check->add_option("file", chk_file, "program file")->required();
  p_check->add_option("--format", chk_format, "override format detection (il|ld|sfc)");
  p_check->add_option("--prop", chk_prop, "property file (JSON)")->required();
  p_check->add_option("--depth", chk_depth, "cycle bound for bounded checking");
  p_check->add_flag("--inductive", chk_inductive, "one-step inductive invariant check");
  p_check->add_option("--max-states", chk_max_states, "visited-state cap");
  p_check->add_option("--json-out", chk_json, "also write the verdict as JSON");

  std::vector<const char*> argv;
  argv.push_back("plc");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (*p_parse) return cmd_parse(parse_file, parse_format, out);
    if (*p_run) return cmd_run(run_file, run_format, run_inputs, run_fuel, out);
    if (*p_translate) return cmd_translate(tr_file, tr_out, out);
    if (*p_equiv) return cmd_equiv(eq_ld, eq_il, eq_exhaustive, eq_random, eq_seed, out);
    if (*p_sim)
      return cmd_simulate(sim_file, sim_format, sim_cycles, sim_inputs, sim_inputs_file, sim_json,
                          sim_fuel, out);
    if (*p_check)
      return cmd_check(chk_file, chk_format, chk_prop, chk_depth, chk_inductive, chk_max_states,
                       chk_json, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace plc::cli
