#include "plc/ld.hpp"

#include "json.hpp"
#include "plc/json_util.hpp"

namespace plc::ld {

using nlohmann::json;

Network Network::contact(VarId v, bool negated) {
  Network n;
  n.kind = Kind::Contact;
  n.var = std::move(v);
  n.negated = negated;
  return n;
}

Network Network::series(std::vector<Network> children) {
  Network n;
  n.kind = Kind::Series;
  n.children = std::move(children);
  return n;
}

Network Network::parallel(std::vector<Network> children) {
  Network n;
  n.kind = Kind::Parallel;
  n.children = std::move(children);
  return n;
}

const char* to_string(CoilMode mode) {
  switch (mode) {
    case CoilMode::Normal: return "normal";
    case CoilMode::Negated: return "negated";
    case CoilMode::Set: return "set";
    case CoilMode::Reset: return "reset";
  }
  return "?";
}

Network flatten(Network net) {
  if (net.kind == Network::Kind::Contact) return net;
  for (Network& child : net.children) child = flatten(std::move(child));
  if (net.children.size() == 1) return std::move(net.children.front());
  return net;
}

namespace {

Network network_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::SyntaxError, "network node must be an object");
  std::string kind = jutil::req_string(j, "kind", "network node");
  if (kind == "contact") {
    jutil::allow_keys(j, {"kind", "var", "negated"}, "contact");
    Network n = Network::contact(jutil::req_string(j, "var", "contact"));
    if (j.contains("negated")) n.negated = jutil::req_bool(j, "negated", "contact");
    return n;
  }
  if (kind == "series" || kind == "parallel") {
    jutil::allow_keys(j, {"kind", "children"}, kind.c_str());
    const json& kids = jutil::req_array(j, "children", kind.c_str());
    if (kids.empty()) throw Error(ErrorKind::SyntaxError, kind + " node with no children");
    std::vector<Network> children;
    children.reserve(kids.size());
    for (const json& k : kids) children.push_back(network_from_json(k));
    Network n = kind == "series" ? Network::series(std::move(children))
                                 : Network::parallel(std::move(children));
    return flatten(std::move(n));
  }
  throw Error(ErrorKind::SyntaxError, "unknown network kind '" + kind + "'");
}

json network_to_json(const Network& n) {
  json j;
  switch (n.kind) {
    case Network::Kind::Contact:
      j["kind"] = "contact";
      j["var"] = n.var;
      j["negated"] = n.negated;
      break;
    case Network::Kind::Series:
    case Network::Kind::Parallel:
      j["kind"] = n.kind == Network::Kind::Series ? "series" : "parallel";
      j["children"] = json::array();
      for (const Network& c : n.children) j["children"].push_back(network_to_json(c));
      break;
  }
  return j;
}

CoilMode coil_mode_from_string(const std::string& s) {
  if (s == "normal") return CoilMode::Normal;
  if (s == "negated") return CoilMode::Negated;
  if (s == "set") return CoilMode::Set;
  if (s == "reset") return CoilMode::Reset;
  throw Error(ErrorKind::SyntaxError, "unknown coil mode '" + s + "'");
}

void check_network_vars(const Network& net, const Environment& env) {
  if (net.kind == Network::Kind::Contact) {
    if (!env.declared(net.var)) throw Error(ErrorKind::UndeclaredVariable, net.var);
    if (env.decl_of(net.var).type != Type::Bool)
      throw Error(ErrorKind::TypeMismatch, "contact on non-BOOL variable '" + net.var + "'");
    return;
  }
  if (net.children.size() < 2)
    throw Error(ErrorKind::SyntaxError, "series/parallel node with fewer than 2 children");
  for (const Network& c : net.children) check_network_vars(c, env);
}

}  // namespace

Program parse(const std::string& json_text) {
  json doc = jutil::parse_document(json_text);
  jutil::allow_keys(doc, {"decls", "rungs"}, "ld document");
  Program prog;
  prog.decls = jutil::decls_from_json(jutil::req_array(doc, "decls", "ld document"));
  const json& rungs = jutil::req_array(doc, "rungs", "ld document");
  for (const json& rj : rungs) {
    if (!rj.is_object()) throw Error(ErrorKind::SyntaxError, "rung must be an object");
    jutil::allow_keys(rj, {"network", "coils"}, "rung");
    Rung rung;
    if (!rj.contains("network")) throw Error(ErrorKind::SyntaxError, "rung missing 'network'");
    rung.network = network_from_json(rj.at("network"));
    const json& coils = jutil::req_array(rj, "coils", "rung");
    if (coils.empty()) throw Error(ErrorKind::SyntaxError, "rung with no coils");
    for (const json& cj : coils) {
      if (!cj.is_object()) throw Error(ErrorKind::SyntaxError, "coil must be an object");
      jutil::allow_keys(cj, {"var", "mode"}, "coil");
      Coil coil;
      coil.var = jutil::req_string(cj, "var", "coil");
      if (cj.contains("mode")) coil.mode = coil_mode_from_string(jutil::req_string(cj, "mode", "coil"));
      rung.coils.push_back(std::move(coil));
    }
    prog.rungs.push_back(std::move(rung));
  }
  validate(prog);
  return prog;
}

std::string print(const Program& prog) {
  json doc;
  doc["decls"] = jutil::decls_to_json(prog.decls);
  doc["rungs"] = json::array();
  for (const Rung& rung : prog.rungs) {
    json rj;
    rj["network"] = network_to_json(rung.network);
    rj["coils"] = json::array();
    for (const Coil& coil : rung.coils) {
      rj["coils"].push_back(json{{"var", coil.var}, {"mode", to_string(coil.mode)}});
    }
    doc["rungs"].push_back(std::move(rj));
  }
  return doc.dump(2) + "\n";
}

void validate(const Program& prog) {
  Environment env = init_env(prog.decls);
  for (const Rung& rung : prog.rungs) {
    check_network_vars(rung.network, env);
    if (rung.coils.empty()) throw Error(ErrorKind::SyntaxError, "rung with no coils");
    for (const Coil& coil : rung.coils) {
      if (!env.declared(coil.var)) throw Error(ErrorKind::UndeclaredVariable, coil.var);
      const VarDecl& d = env.decl_of(coil.var);
      if (d.type != Type::Bool)
        throw Error(ErrorKind::TypeMismatch, "coil on non-BOOL variable '" + coil.var + "'");
      if (d.kind == VarKind::Input)
        throw Error(ErrorKind::SyntaxError, "coil on INPUT variable '" + coil.var + "'");
    }
  }
}

bool eval_network(const Network& net, const Environment& env) {
  switch (net.kind) {
    case Network::Kind::Contact: {
      bool v = env.read(net.var).as_bool();
      return net.negated ? !v : v;
    }
    case Network::Kind::Series: {
      for (const Network& c : net.children)
        if (!eval_network(c, env)) return false;
      return true;
    }
    case Network::Kind::Parallel: {
      for (const Network& c : net.children)
        if (eval_network(c, env)) return true;
      return false;
    }
  }
  return false;
}

Environment eval_rung(const Rung& rung, Environment env) {
  const bool power = eval_network(rung.network, env);
  for (const Coil& coil : rung.coils) {
    switch (coil.mode) {
      case CoilMode::Normal:
        env.set(coil.var, Value::boolean(power));
        break;
      case CoilMode::Negated:
        env.set(coil.var, Value::boolean(!power));
        break;
      case CoilMode::Set:
        if (power) env.set(coil.var, Value::boolean(true));
        break;
      case CoilMode::Reset:
        if (power) env.set(coil.var, Value::boolean(false));
        break;
    }
  }
  return env;
}

Environment eval(const Program& prog, Environment env) {
  for (const Rung& rung : prog.rungs) env = eval_rung(rung, std::move(env));
  return env;
}

}  // namespace plc::ld
