#include "doctest.h"
#include "support.hpp"

using namespace testing;

TEST_CASE("domains resolve literals to codes") {
  const auto b = VarDomain::boolean();
  CHECK(b.parse_literal("T") == 1);
  CHECK(b.parse_literal("F") == 0);
  CHECK_FALSE(b.parse_literal("true"));
  CHECK(b.literal(1) == "T");

  const auto r = VarDomain::range(0, 1);
  CHECK(r.codes() == std::vector<int>{0, 1});
  CHECK(r.parse_literal("1") == 1);
  CHECK_FALSE(r.parse_literal("2"));
  CHECK_FALSE(r.parse_literal("x"));
  CHECK(r.describe() == "0..1");

  const auto e = VarDomain::enumeration({"none", "Espresso", "Cappuchino", "Milk"});
  CHECK(e.parse_literal("Espresso") == 1);
  CHECK_FALSE(e.parse_literal("espresso"));  // labels are case-sensitive
  CHECK(e.literal(3) == "Milk");
  CHECK(e.describe() == "enum {none,Espresso,Cappuchino,Milk}");
}

TEST_CASE("invalid domains are rejected") {
  CHECK_THROWS_AS(VarDomain::range(2, 1), ModelError);
  CHECK_THROWS_AS(VarDomain::enumeration({}), ModelError);
  CHECK_THROWS_AS(VarDomain::enumeration({"a", "a"}), ModelError);
}

TEST_CASE("compatible treats Unknown as a universal absorber") {
  const auto T = CellValue::known(1), F = CellValue::known(0), U = CellValue::unknown();
  CHECK(compatible(T, T));
  CHECK(compatible(U, F));
  CHECK(compatible(F, U));
  CHECK(compatible(U, U));
  CHECK_FALSE(compatible(T, F));
}

TEST_CASE("unify is the pointwise join") {
  const DomainTheory dt = load_dt("coffee/theory.dt");
  SUBCASE("unknown meets known") {
    CHECK(unify(cells_of(dt, "<?,?,?,?,?>"), cells_of(dt, "<F,?,?,?,?>")) == cells_of(dt, "<F,?,?,?,?>"));
  }
  SUBCASE("equal vectors stay put") {
    const auto v = cells_of(dt, "<F,F,?,?,?>");
    CHECK(unify(v, v) == v);
  }
  SUBCASE("clash") { CHECK_FALSE(unify(cells_of(dt, "<T,?,?,?,?>"), cells_of(dt, "<F,?,?,?,?>"))); }
  SUBCASE("width mismatch") { CHECK_THROWS(unify(cells_of(dt, "<T,?,?,?,?>"), Cells(2))); }
}

TEST_CASE("unify laws on random rows") {
  Generator gen(11);
  for (int i = 0; i < 500; ++i) {
    const std::size_t w = static_cast<std::size_t>(gen.pick(0, 5));
    Cells a(w), b(w);
    for (std::size_t j = 0; j < w; ++j) {
      if (gen.chance(0.5)) a[j] = CellValue::known(gen.pick(0, 1));
      if (gen.chance(0.5)) b[j] = CellValue::known(gen.pick(0, 1));
    }
    const auto ab = unify(a, b);
    CHECK(ab == unify(b, a));
    CHECK(unify(a, a) == a);
    bool clash = false;
    for (std::size_t j = 0; j < w; ++j) clash |= !compatible(a[j], b[j]);
    CHECK(ab.has_value() == !clash);
    if (ab) {
      for (std::size_t j = 0; j < w; ++j) {
        CHECK((*ab)[j].is_known() == (a[j].is_known() || b[j].is_known()));
      }
    }
  }
}

TEST_CASE("state vectors only ground unknown cells") {
  StateVector v(3);
  CHECK(v.size() == 3);
  v.ground(1, 4, provenance::Initial{});
  CHECK(v[1] == CellValue::known(4));
  CHECK_THROWS(v.ground(1, 5, provenance::Initial{}));
  CHECK_THROWS(v.ground(3, 0, provenance::Initial{}));
}

TEST_CASE("domain theory lookups") {
  const DomainTheory dt = load_dt("coffee/theory.dt");
  CHECK(dt.width() == 5);
  REQUIRE(dt.find_variable("Coin"));
  CHECK(dt.find_variable("Coin")->index == 3);
  CHECK_FALSE(dt.find_variable("coin"));
  CHECK(dt.find_spec("Insert coin"));  // declared as "insert coin"
  CHECK_FALSE(dt.find_spec("Make coffee"));
  CHECK_THROWS_AS(DomainTheory({{"x", VarDomain::boolean(), 1}}, {}), ModelError);
  CHECK_THROWS_AS(DomainTheory({{"x", VarDomain::boolean(), 0}, {"x", VarDomain::boolean(), 1}}, {}), ModelError);
}

TEST_CASE("sequence diagram validation") {
  SequenceDiagram sd{"S", {"A", "B"}, {{1, "m", {}, "A", "B"}}, {}};
  CHECK_NOTHROW(sd.validate());
  CHECK(sd.message(1).label == "m");
  SUBCASE("undeclared endpoint") {
    sd.messages[0].receiver = "C";
    CHECK_THROWS_AS(sd.validate(), ModelError);
  }
  SUBCASE("non-contiguous ids") {
    sd.messages[0].id = 2;
    CHECK_THROWS_AS(sd.validate(), ModelError);
  }
  SUBCASE("duplicate object") {
    sd.objects.push_back("A");
    CHECK_THROWS_AS(sd.validate(), ModelError);
  }
  SUBCASE("no-loop outside the diagram") {
    sd.no_loops.push_back({1, 2});
    CHECK_THROWS_AS(sd.validate(), ModelError);
  }
}

TEST_CASE("message text carries the argument list") {
  CHECK(Message{1, "Enter Selection", {"Espresso"}, "U", "C"}.text() == "Enter Selection(Espresso)");
  CHECK(Message{1, "f", {"a", "b"}, "U", "C"}.text() == "f(a, b)");
  CHECK(Message{1, "Take coin", {}, "U", "C"}.text() == "Take coin");
}

namespace {

// A{A1,A2,A3}, B, C with transitions at both levels.
Statechart composite_chart() {
  State a{"A", "", {{"A1", "", {}, {}, {}}, {"A2", "", {}, {}, {}}, {"A3", "", {}, {}, {}}}, "A1", {}};
  a.transitions = {{"A1", "A2", "x", {}, {}}, {"A2", "A3", "y", {}, {"out"}}};
  Statechart sc{"O", {a, {"B", "", {}, {}, {}}, {"C", "", {}, {}, {}}}, "A", {}};
  sc.transitions = {{"A", "B", "leave", {}, {}}, {"B", "A", "enter", {}, {}}, {"A3", "C", "done", {}, {}}};
  return sc;
}

}  // namespace

TEST_CASE("flatten resolves composites to leaves") {
  const FlatMachine fm = flatten(composite_chart());
  CHECK(fm.states == std::vector<std::string>{"A1", "A2", "A3", "B", "C"});
  CHECK(fm.initial == 0);
  auto count = [&](const std::string& ev) {
    return std::count_if(fm.edges.begin(), fm.edges.end(), [&](const auto& e) { return e.event == ev; });
  };
  CHECK(count("leave") == 3);  // fans out from every leaf of A
  CHECK(count("enter") == 1);
  for (const auto& e : fm.edges) {
    if (e.event == "enter") CHECK(e.to == 0);  // enters A's initial leaf
    if (e.event == "done") CHECK(e.from == 2);
  }
}

TEST_CASE("statechart validation") {
  Statechart sc = composite_chart();
  CHECK_NOTHROW(sc.validate());
  SUBCASE("missing initial") {
    sc.initial.clear();
    CHECK_THROWS_AS(sc.validate(), ModelError);
  }
  SUBCASE("dangling endpoint") {
    sc.transitions.push_back({"B", "Z", "e", {}, {}});
    CHECK_THROWS_AS(sc.validate(), ModelError);
  }
  SUBCASE("duplicate name in scope") {
    sc.states.push_back({"B", "", {}, {}, {}});
    CHECK_THROWS_AS(sc.validate(), ModelError);
  }
  SUBCASE("same leaf name in two composites is ambiguous from outside") {
    sc.states.push_back({"D", "", {{"A1", "", {}, {}, {}}}, "A1", {}});
    sc.transitions.push_back({"B", "A1", "e", {}, {}});
    CHECK_THROWS_AS(sc.validate(), ModelError);
  }
}

TEST_CASE("flatten qualifies colliding leaf names") {
  Statechart sc{"O", {{"P", "", {{"X", "", {}, {}, {}}}, "X", {}}, {"Q", "", {{"X", "", {}, {}, {}}}, "X", {}}}, "P", {}};
  sc.transitions = {{"P", "Q", "go", {}, {}}};
  const FlatMachine fm = flatten(sc);
  CHECK(fm.states == std::vector<std::string>{"P.X", "Q.X"});
  REQUIRE(fm.edges.size() == 1);
  CHECK(fm.edges[0].to == 1);
}
