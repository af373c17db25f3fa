#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "plc/checker.hpp"
#include "plc/il.hpp"
#include "plc/ld.hpp"
#include "plc/ld2il.hpp"
#include "plc/sfc.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<fs::path> corpus_files(const std::string& suffix) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::recursive_directory_iterator(PLC_CORPUS_DIR)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() >= suffix.size() && name.ends_with(suffix)) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("roundtrip") {

TEST_CASE("corpus has enough fixtures") {
  size_t programs = corpus_files(".il").size() + corpus_files(".ld.json").size() +
                    corpus_files(".sfc.json").size();
  CHECK(programs >= 50);
}

TEST_CASE("il files: parse/print identity") {
  auto files = corpus_files(".il");
  REQUIRE(!files.empty());
  for (const fs::path& p : files) {
    CAPTURE(p.string());
    plc::il::Program prog = plc::il::parse(slurp(p));
    plc::il::Program again = plc::il::parse(plc::il::print(prog));
    REQUIRE(again == prog);
    // Printing is a fixpoint once canonical.
    REQUIRE(plc::il::print(again) == plc::il::print(prog));
  }
}

TEST_CASE("ld files: parse/print identity") {
  auto files = corpus_files(".ld.json");
  REQUIRE(!files.empty());
  for (const fs::path& p : files) {
    CAPTURE(p.string());
    plc::ld::Program prog = plc::ld::parse(slurp(p));
    plc::ld::Program again = plc::ld::parse(plc::ld::print(prog));
    REQUIRE(again == prog);
    REQUIRE(plc::ld::print(again) == plc::ld::print(prog));
  }
}

TEST_CASE("sfc files: parse/print identity") {
  auto files = corpus_files(".sfc.json");
  REQUIRE(!files.empty());
  for (const fs::path& p : files) {
    CAPTURE(p.string());
    plc::sfc::Model model = plc::sfc::load(slurp(p));
    plc::sfc::Model again = plc::sfc::load(plc::sfc::print(model));
    REQUIRE(again == model);
    REQUIRE(plc::sfc::print(again) == plc::sfc::print(model));
  }
}

TEST_CASE("translated corpus programs re-parse to the same IL") {
  auto files = corpus_files(".ld.json");
  REQUIRE(!files.empty());
  for (const fs::path& p : files) {
    CAPTURE(p.string());
    plc::ld::Program prog = plc::ld::parse(slurp(p));
    plc::il::Program compiled = plc::ld2il::compile(prog);
    REQUIRE(plc::il::parse(plc::il::print(compiled)) == compiled);
  }
}

TEST_CASE("corpus LD programs are equivalent to their compilation") {
  for (const fs::path& p : corpus_files(".ld.json")) {
    CAPTURE(p.string());
    plc::ld::Program prog = plc::ld::parse(slurp(p));
    if (plc::bool_var_names(prog.decls).size() > 20) continue;
    REQUIRE(plc::ld2il::check_equivalence(prog, plc::ld2il::compile(prog)).equivalent);
  }
}

TEST_CASE("corpus spot checks execute as intended") {
  namespace chk = plc::checker;
  const fs::path root = PLC_CORPUS_DIR;

  SUBCASE("il countdown reaches zero") {
    plc::il::Program prog = plc::il::parse(slurp(root / "il" / "08_countdown.il"));
    plc::Environment env = plc::il::run(prog, plc::init_env(prog.decls));
    CHECK(env.read("n") == plc::Value::integer(0));
    CHECK(env.read("done") == plc::Value::boolean(true));
  }

  SUBCASE("il majority vote") {
    chk::System sys = plc::il::parse(slurp(root / "il" / "04_majority.il"));
    chk::SysState st = chk::initial_state(sys);
    st = chk::scan_cycle(sys, {{"a", plc::Value::boolean(true)},
                               {"b", plc::Value::boolean(false)},
                               {"c", plc::Value::boolean(true)}},
                         std::move(st));
    CHECK(st.env.read("m") == plc::Value::boolean(true));
  }

  SUBCASE("il wrap-around") {
    plc::il::Program prog = plc::il::parse(slurp(root / "il" / "06_arith_wrap.il"));
    plc::Environment env = plc::il::run(prog, plc::init_env(prog.decls));
    CHECK(env.read("out") == plc::Value::integer(INT32_MIN));
  }

  SUBCASE("ld seal-in circuit latches through its own contact") {
    chk::System sys = plc::ld::parse(slurp(root / "ld" / "09_seal_in.ld.json"));
    chk::SysState st = chk::initial_state(sys);
    auto inputs = [](bool push, bool cut) {
      return chk::InputAssignment{{"push", plc::Value::boolean(push)},
                                  {"cut", plc::Value::boolean(cut)}};
    };
    st = chk::scan_cycle(sys, inputs(true, false), std::move(st));
    CHECK(st.env.read("motor") == plc::Value::boolean(true));
    st = chk::scan_cycle(sys, inputs(false, false), std::move(st));
    CHECK(st.env.read("motor") == plc::Value::boolean(true));  // sealed in
    st = chk::scan_cycle(sys, inputs(false, true), std::move(st));
    CHECK(st.env.read("motor") == plc::Value::boolean(false));
  }

  SUBCASE("sfc self-loop pulses once per re-entry") {
    chk::System sys = plc::sfc::load(slurp(root / "sfc" / "10_self_loop.sfc.json"));
    chk::SysState st = chk::initial_state(sys);
    auto kick = [](bool b) { return chk::InputAssignment{{"kick", plc::Value::boolean(b)}}; };
    st = chk::scan_cycle(sys, kick(true), std::move(st));
    CHECK(st.env.read("n") == plc::Value::integer(1));
    st = chk::scan_cycle(sys, kick(true), std::move(st));
    CHECK(st.env.read("n") == plc::Value::integer(2));
    st = chk::scan_cycle(sys, kick(false), std::move(st));
    CHECK(st.env.read("n") == plc::Value::integer(2));  // no firing, no pulse
  }

  SUBCASE("sfc ring phases") {
    chk::System sys = plc::sfc::load(slurp(root / "sfc" / "02_ring.sfc.json"));
    chk::SysState st = chk::initial_state(sys);
    auto tick = [](bool b) { return chk::InputAssignment{{"tick", plc::Value::boolean(b)}}; };
    st = chk::scan_cycle(sys, tick(true), std::move(st));
    CHECK(st.env.read("phase") == plc::Value::integer(1));
    st = chk::scan_cycle(sys, tick(true), std::move(st));
    CHECK(st.env.read("phase") == plc::Value::integer(2));
    st = chk::scan_cycle(sys, tick(false), std::move(st));
    CHECK(st.env.read("phase") == plc::Value::integer(2));  // holds without tick
  }
}

TEST_CASE("property files: parse/print identity") {
  auto files = corpus_files(".prop.json");
  REQUIRE(!files.empty());
  for (const fs::path& p : files) {
    CAPTURE(p.string());
    plc::checker::Property prop = plc::checker::parse_property(slurp(p));
    plc::checker::Property again = plc::checker::parse_property(plc::checker::print_property(prop));
    REQUIRE(again == prop);
  }
}

}  // TEST_SUITE
