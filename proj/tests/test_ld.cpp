#include "doctest.h"

#include <functional>

#include "generators.hpp"
#include "oracles.hpp"
#include "plc/ld.hpp"

using namespace plc;
using plctest::Rng;

namespace {

const char* kTwoVarDoc = R"({
  "decls": [
    {"name": "A", "type": "BOOL", "kind": "INPUT"},
    {"name": "B", "type": "BOOL", "kind": "OUTPUT"}
  ],
  "rungs": [
    {"network": {"kind": "contact", "var": "A"},
     "coils": [{"var": "B", "mode": "normal"}]}
  ]
})";

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  throw std::logic_error("expected a plc::Error");
}

Environment env_of(const ld::Program& prog, const std::vector<VarId>& vars, uint64_t bits) {
  Environment env = init_env(prog.decls);
  assign_bool_bits(env, vars, bits);
  return env;
}

}  // namespace

TEST_SUITE("ld") {

TEST_CASE("parse: one rung, one coil") {
  ld::Program prog = ld::parse(kTwoVarDoc);
  REQUIRE(prog.rungs.size() == 1);
  CHECK(prog.rungs[0].network == ld::Network::contact("A", false));
  REQUIRE(prog.rungs[0].coils.size() == 1);
  CHECK(prog.rungs[0].coils[0] == ld::Coil{"B", ld::CoilMode::Normal});
}

TEST_CASE("parse: series of NO and NC contacts") {
  ld::Program prog = ld::parse(R"({
    "decls": [
      {"name": "A", "type": "BOOL", "kind": "INPUT"},
      {"name": "B", "type": "BOOL", "kind": "INPUT"},
      {"name": "Y", "type": "BOOL", "kind": "OUTPUT"}
    ],
    "rungs": [
      {"network": {"kind": "series", "children": [
         {"kind": "contact", "var": "A"},
         {"kind": "contact", "var": "B", "negated": true}]},
       "coils": [{"var": "Y"}]}
    ]
  })");
  ld::Network expected = ld::Network::series({ld::Network::contact("A"), ld::Network::contact("B", true)});
  CHECK(prog.rungs[0].network == expected);
}

TEST_CASE("parse: undeclared contact variable") {
  CHECK(kind_of([] {
          ld::parse(R"({"decls": [{"name": "B", "type": "BOOL", "kind": "OUTPUT"}],
                        "rungs": [{"network": {"kind": "contact", "var": "Q"},
                                   "coils": [{"var": "B"}]}]})");
        }) == ErrorKind::UndeclaredVariable);
}

TEST_CASE("parse: singleton nodes are flattened") {
  ld::Program prog = ld::parse(R"({
    "decls": [
      {"name": "A", "type": "BOOL", "kind": "INPUT"},
      {"name": "Y", "type": "BOOL", "kind": "OUTPUT"}
    ],
    "rungs": [
      {"network": {"kind": "series", "children": [
         {"kind": "parallel", "children": [{"kind": "contact", "var": "A"}]}]},
       "coils": [{"var": "Y"}]}
    ]
  })");
  CHECK(prog.rungs[0].network == ld::Network::contact("A"));
}

TEST_CASE("parse: rejects non-BOOL contacts, INPUT coils, unknown fields") {
  CHECK(kind_of([] {
          ld::parse(R"({"decls": [{"name": "n", "type": "INT", "kind": "LOCAL"},
                                  {"name": "B", "type": "BOOL", "kind": "OUTPUT"}],
                        "rungs": [{"network": {"kind": "contact", "var": "n"},
                                   "coils": [{"var": "B"}]}]})");
        }) == ErrorKind::TypeMismatch);
  CHECK(kind_of([] {
          ld::parse(R"({"decls": [{"name": "A", "type": "BOOL", "kind": "INPUT"}],
                        "rungs": [{"network": {"kind": "contact", "var": "A"},
                                   "coils": [{"var": "A"}]}]})");
        }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] {
          ld::parse(R"({"decls": [], "rungs": [], "extra": 1})");
        }) == ErrorKind::SyntaxError);
}

TEST_CASE("eval_network: contact reads the environment") {
  Environment env = init_env({VarDecl{"A", Type::Bool, VarKind::Input, Value::boolean(true)}});
  CHECK(ld::eval_network(ld::Network::contact("A"), env));
  CHECK_FALSE(ld::eval_network(ld::Network::contact("A", true), env));
}

TEST_CASE("eval_network: series is conjunction over all four environments") {
  ld::Program prog = ld::parse(R"({
    "decls": [
      {"name": "A", "type": "BOOL", "kind": "INPUT"},
      {"name": "B", "type": "BOOL", "kind": "INPUT"},
      {"name": "Y", "type": "BOOL", "kind": "OUTPUT"}
    ],
    "rungs": [{"network": {"kind": "series", "children": [
                 {"kind": "contact", "var": "A"},
                 {"kind": "contact", "var": "B", "negated": true}]},
               "coils": [{"var": "Y"}]}]
  })");
  const std::vector<VarId> vars = {"A", "B"};
  for (uint64_t bits = 0; bits < 4; ++bits) {
    const bool a = (bits >> 1) & 1, b = bits & 1;
    CHECK(ld::eval_network(prog.rungs[0].network, env_of(prog, vars, bits)) == (a && !b));
  }
}

TEST_CASE("eval_network: (A and B) or C over all eight environments") {
  ld::Network net = ld::Network::parallel(
      {ld::Network::series({ld::Network::contact("A"), ld::Network::contact("B")}),
       ld::Network::contact("C")});
  std::vector<VarDecl> decls = {VarDecl{"A", Type::Bool, VarKind::Input, std::nullopt},
                                VarDecl{"B", Type::Bool, VarKind::Input, std::nullopt},
                                VarDecl{"C", Type::Bool, VarKind::Input, std::nullopt}};
  const std::vector<VarId> vars = {"A", "B", "C"};
  for (uint64_t bits = 0; bits < 8; ++bits) {
    Environment env = init_env(decls);
    assign_bool_bits(env, vars, bits);
    const bool a = (bits >> 2) & 1, b = (bits >> 1) & 1, c = bits & 1;
    CHECK(ld::eval_network(net, env) == ((a && b) || c));
  }
}

TEST_CASE("eval_rung: normal coil follows the network") {
  ld::Program prog = ld::parse(kTwoVarDoc);
  Environment env = write(init_env(prog.decls), "A", Value::boolean(true));
  CHECK(ld::eval_rung(prog.rungs[0], env).read("B") == Value::boolean(true));
}

TEST_CASE("eval_rung: SET is latching") {
  ld::Rung rung{ld::Network::contact("A"), {ld::Coil{"B", ld::CoilMode::Set}}};
  Environment env = init_env({VarDecl{"A", Type::Bool, VarKind::Input, std::nullopt},
                              VarDecl{"B", Type::Bool, VarKind::Output, Value::boolean(true)}});
  // A is false: SET leaves B latched true.
  CHECK(ld::eval_rung(rung, env).read("B") == Value::boolean(true));
}

TEST_CASE("eval_rung: two coils share one network value") {
  ld::Rung rung{ld::Network::contact("A"),
                {ld::Coil{"B", ld::CoilMode::Normal}, ld::Coil{"C", ld::CoilMode::Negated}}};
  Environment env = init_env({VarDecl{"A", Type::Bool, VarKind::Input, Value::boolean(true)},
                              VarDecl{"B", Type::Bool, VarKind::Output, std::nullopt},
                              VarDecl{"C", Type::Bool, VarKind::Output, Value::boolean(true)}});
  Environment out = ld::eval_rung(rung, env);
  CHECK(out.read("B") == Value::boolean(true));
  CHECK(out.read("C") == Value::boolean(false));
}

TEST_CASE("eval_rung touches only coil variables") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    ld::Program prog = plctest::gen_ld_program(rng);
    const ld::Rung& rung = prog.rungs[0];
    std::set<VarId> coil_vars;
    for (const ld::Coil& c : rung.coils) coil_vars.insert(c.var);
    Environment env = init_env(prog.decls);
    assign_bool_bits(env, bool_var_names(prog.decls), rng.bits());
    Environment out = ld::eval_rung(rung, env);
    for (const auto& [name, value] : env.bindings()) {
      if (!coil_vars.count(name)) CHECK(out.read(name) == value);
    }
  }
}

TEST_CASE("eval: rungs fold top to bottom with write-through") {
  const char* doc = R"({
    "decls": [
      {"name": "A", "type": "BOOL", "kind": "INPUT"},
      {"name": "B", "type": "BOOL", "kind": "LOCAL"},
      {"name": "C", "type": "BOOL", "kind": "OUTPUT"}
    ],
    "rungs": [
      {"network": {"kind": "contact", "var": "A"}, "coils": [{"var": "B"}]},
      {"network": {"kind": "contact", "var": "B"}, "coils": [{"var": "C"}]}
    ]
  })";
  ld::Program prog = ld::parse(doc);
  Environment env = write(init_env(prog.decls), "A", Value::boolean(true));
  Environment out = ld::eval(prog, env);
  CHECK(out.read("B") == Value::boolean(true));
  CHECK(out.read("C") == Value::boolean(true));  // rung 2 sees rung 1's write
}

TEST_CASE("eval: empty program is the identity") {
  ld::Program prog;
  prog.decls = {VarDecl{"A", Type::Bool, VarKind::Input, Value::boolean(true)}};
  Environment env = init_env(prog.decls);
  CHECK(ld::eval(prog, env) == env);
}

TEST_CASE("eval: rung order is observable") {
  // Swapped order: C samples B before B is recomputed.
  ld::Program swapped = ld::parse(R"({
    "decls": [
      {"name": "A", "type": "BOOL", "kind": "INPUT"},
      {"name": "B", "type": "BOOL", "kind": "LOCAL"},
      {"name": "C", "type": "BOOL", "kind": "OUTPUT"}
    ],
    "rungs": [
      {"network": {"kind": "contact", "var": "B"}, "coils": [{"var": "C"}]},
      {"network": {"kind": "contact", "var": "A"}, "coils": [{"var": "B"}]}
    ]
  })");
  Environment env = write(init_env(swapped.decls), "A", Value::boolean(true));
  Environment out = ld::eval(swapped, env);
  CHECK(out.read("C") == Value::boolean(false));  // old B
  CHECK(out.read("B") == Value::boolean(true));
}

TEST_CASE("eval_network agrees with the truth-table oracle on random networks") {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const int nvars = rng.range(1, 8);
    std::vector<VarDecl> decls;
    std::vector<VarId> vars;
    for (int v = 0; v < nvars; ++v) {
      decls.push_back(VarDecl{"v" + std::to_string(v), Type::Bool, VarKind::Input, std::nullopt});
      vars.push_back(decls.back().name);
    }
    ld::Network net = plctest::gen_network(rng, vars, rng.range(1, 4));
    std::bitset<256> table = plctest::network_truth_table(net, vars);
    const uint64_t envs = uint64_t{1} << nvars;
    for (uint64_t bits = 0; bits < envs; ++bits) {
      Environment env = init_env(decls);
      assign_bool_bits(env, vars, bits);
      REQUIRE(ld::eval_network(net, env) == table[bits]);
    }
  }
}

TEST_CASE("flattening preserves evaluation") {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const int nvars = rng.range(1, 5);
    std::vector<VarDecl> decls;
    std::vector<VarId> vars;
    for (int v = 0; v < nvars; ++v) {
      decls.push_back(VarDecl{"v" + std::to_string(v), Type::Bool, VarKind::Input, std::nullopt});
      vars.push_back(decls.back().name);
    }
    // Wrap generated networks in singleton chains, then flatten.
    ld::Network net = plctest::gen_network(rng, vars, rng.range(0, 3));
    ld::Network wrapped = ld::Network::series({ld::Network::parallel({net})});
    ld::Network flat = ld::flatten(wrapped);
    CHECK(flat == ld::flatten(net));
    for (uint64_t bits = 0; bits < (uint64_t{1} << nvars); ++bits) {
      Environment env = init_env(decls);
      assign_bool_bits(env, vars, bits);
      REQUIRE(ld::eval_network(wrapped, env) == ld::eval_network(flat, env));
    }
  }
}

}  // TEST_SUITE
