#include "doctest.h"
#include "fixtures.hpp"
#include "prisyn/bench.hpp"
#include "prisyn/model.hpp"

#include <fstream>
#include <sstream>

using namespace prisyn;

namespace {

std::string fig1_doc(const std::string& extra = "") {
  return R"({
    "components": [
      {"name": "C1", "locations": ["idle", "used"], "initial": "idle",
       "transitions": [{"from": "idle", "to": "used", "label": "a"},
                       {"from": "used", "to": "idle", "label": "b"}]},
      {"name": "C2", "locations": ["idle", "used"], "initial": "idle",
       "transitions": [{"from": "idle", "to": "used", "label": "c"},
                       {"from": "used", "to": "idle", "label": "d"}]}
    ],
    "communication": [["C1", "C1"], ["C2", "C2"], ["C2", "C1"]],
    "risk": "C1@used & C2@used")" +
         extra + "}";
}

}  // namespace

TEST_CASE("expressions parse with ! over & over |") {
  CHECK(parse_expr("a | b & !c").to_string() == "a | b & !c");
  CHECK(parse_expr("(a | b) & c").to_string() == "(a | b) & c");
  CHECK(parse_expr("true").op() == Expr::Op::Const);
  CHECK(parse_expr("C1@used").atom_ref().text == "C1@used");
  CHECK_THROWS_AS(parse_expr("a &"), ParseError);
  CHECK_THROWS_AS(parse_expr("(a"), ParseError);
  CHECK_THROWS_AS(parse_expr(""), ParseError);

  const Expr e = parse_expr("!x | y & x");
  auto eval = [&](bool x, bool y) {
    return e.evaluate([&](const Atom& a) { return a.text == "x" ? x : y; });
  };
  CHECK(eval(false, false));
  CHECK_FALSE(eval(true, false));
  CHECK(eval(true, true));
}

TEST_CASE("the two-resource document loads") {
  const Model m = parse_system(fig1_doc());
  const System& sys = m.system;
  CHECK(sys.components.size() == 2);
  CHECK(sys.alphabet == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(sys.priorities.empty());
  CHECK(sys.participants(*sys.find_interaction("c")) == std::vector<ComponentId>{1});
  CHECK(m.architecture.informs(1, 0));
  CHECK_FALSE(m.architecture.informs(0, 1));
  CHECK(check_deployable(sys, m.architecture).empty());
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(parse_system("{"), ParseError);
  CHECK_THROWS_AS(parse_system("[]"), ParseError);
  CHECK_THROWS_AS(parse_system(R"({"components": []})"), ParseError);
  CHECK_THROWS_AS(parse_system(R"({"components": [{"name": "A", "locations": ["x"], "initial": "y"}]})"),
                  ParseError);
  // A component without transitions leaves the alphabet empty.
  CHECK_THROWS_AS(parse_system(R"({"components": [{"name": "A", "locations": ["x"], "initial": "x"}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_system(fig1_doc(R"(, "priorities": [["a", "zz"]])")), ParseError);
  CHECK_THROWS_AS(parse_system(R"({"components": [{"name": "A", "locations": ["x"], "initial": "x",
      "variables": {"v": true},
      "transitions": [{"from": "x", "to": "x", "label": "s", "update": {"w": "true"}}]}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_system(R"({"components": [{"name": "A", "locations": ["x"], "initial": "x",
      "variables": {"v": true},
      "transitions": [{"from": "x", "to": "x", "label": "s", "update": {"v": "maybe"}}]}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_system(R"({"components": [{"name": "A", "locations": ["x"], "initial": "x",
      "transitions": [{"from": "x", "to": "x", "label": "s", "guard": "ghost"}]}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_system(fig1_doc().replace(fig1_doc().find("C1@used"), 7, "C9@used")), ParseError);
}

TEST_CASE("priorities are closed and cycles rejected with a witness") {
  const PrioritySet closed = close_priorities({{0, 1}, {1, 2}}, 3);
  CHECK(closed == PrioritySet{{0, 1}, {0, 2}, {1, 2}});
  try {
    close_priorities({{0, 1}, {1, 0}}, 2);
    FAIL("expected a cycle");
  } catch (const CycleError& e) {
    const auto& w = e.witness();
    REQUIRE(w.size() >= 3);
    CHECK(w.front() == w.back());
  }
  CHECK_THROWS_AS(parse_system(fig1_doc(R"(, "priorities": [["a", "b"], ["b", "a"]])")), CycleError);
}

TEST_CASE("deployability: existing priority needs the high side to inform the low side") {
  const Model m = parse_system(fig1_doc(R"(, "priorities": [["a", "d"], ["c", "b"]])"));
  const auto v = check_deployable(m.system, m.architecture);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == DeployViolation::Kind::PriorityTransmission);
  CHECK(v[0].message == "existing-priority transmission: c < b requires C1 -> C2");

  CommArchitecture empty(2);
  const auto selfs = check_deployable(m.system, empty);
  CHECK(std::count_if(selfs.begin(), selfs.end(), [](const DeployViolation& d) {
          return d.kind == DeployViolation::Kind::SelfTransmission;
        }) == 2);
  CHECK(check_deployable(m.system, mandatory_architecture(m.system)).empty());
}

TEST_CASE("visibility follows the informs relation over all participant pairs") {
  const Model m = gen_fig1();
  const System& sys = m.system;
  const VisTable vis = compute_visibility(sys, m.architecture);
  auto id = [&](const char* s) { return *sys.find_interaction(s); };
  CHECK(vis(id("c"), id("a")));   // C2 informs C1
  CHECK(vis(id("d"), id("a")));
  CHECK_FALSE(vis(id("a"), id("c")));
  CHECK_FALSE(vis(id("b"), id("c")));
  CHECK(vis(id("b"), id("a")));
}

TEST_CASE("priority lists parse and format") {
  const Model m = gen_fig1();
  const PrioritySet p = parse_priority_list(m.system, "# fix\na < c\n\n  a<d  \n");
  CHECK(p == fixtures::pairs(m.system, {{"a", "c"}, {"a", "d"}}));
  CHECK(format_priorities(m.system, p) == "a < c\na < d\n");
  CHECK_THROWS_AS(parse_priority_list(m.system, "a c"), ParseError);
  CHECK_THROWS_AS(parse_priority_list(m.system, "a < zz"), ParseError);
}

TEST_CASE("model documents round-trip through the writer") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Model m = gen_random(seed);
    const std::string doc = write_model(m.system, m.architecture);
    const Model back = parse_system(doc);
    CHECK(write_model(back.system, back.architecture) == doc);
  }
}

TEST_CASE("the checked-in fixture matches the generator") {
  std::ifstream in(std::string(PRISYN_TEST_DATA) + "/fig1.json");
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  const Model file = parse_system(ss.str());
  const Model gen = gen_fig1();
  CHECK(write_model(file.system, file.architecture) == write_model(gen.system, gen.architecture));
}
