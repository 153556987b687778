#include "doctest.h"
#include "support.hpp"

using namespace testing;

namespace {

SequenceDiagram with_strays() {
  // The refinement scenario plus two receptions no chart knows about.
  return parse_sd(
      "sd Stray\nobjects Env, Ctl, Out\n"
      "msg 1 Env -> Ctl : e1\nmsg 2 Ctl -> Out : a1\nmsg 3 Env -> Ctl : zz\n"
      "msg 4 Env -> Ctl : e2\nmsg 5 Ctl -> Out : a3\nmsg 6 Env -> Ctl : zz\n"
      "msg 7 Env -> Ctl : e4\nmsg 8 Ctl -> Out : a4\n");
}

const DomainTheory& guard_theory() {
  static const DomainTheory dt =
      parse_domain_theory("v0 : Boolean\ncontext on\npost: v0 = T ;\ncontext off\npost: v0 = F ;\ncontext m0\n");
  return dt;
}

const Statechart& guard_chart() {
  static const Statechart sc = parse_sc("statechart B\nstate A\nstate C\ninitial A\nA -> A : on\nA -> A : off\n"
                                        "A -> C : m0 [v0 = T]\n");
  return sc;
}

}  // namespace

TEST_CASE("replay accepts the diagram a chart was built from") {
  const DomainTheory dt = load_dt("refine/theory.dt");
  const auto t = replay(load_sd("refine/sd.sd"), "Ctl", load_sc("refine/original.sc"), dt);
  CHECK(t.accepted);
  REQUIRE(t.steps.size() == 3);
  CHECK(t.consumed == 6);
  CHECK(t.steps[0].from == "N1");
  CHECK(t.steps[0].to == "N2");
  CHECK(t.steps[2].to == "N1");
  REQUIRE(t.steps[1].matched);
  CHECK(t.steps[1].matched->event == "e2");
  CHECK(t.sd_name == "Refine");
  CHECK(t.object == "Ctl");
}

TEST_CASE("replay against the refined chart stops at the second step") {
  const DomainTheory dt = load_dt("refine/theory.dt");
  const auto t = replay(load_sd("refine/sd.sd"), "Ctl", load_sc("refine/edited.sc"), dt);
  CHECK_FALSE(t.accepted);
  CHECK(t.rejected_at == 1);
  CHECK(t.consumed == 3);
  REQUIRE(t.steps.size() > 1);
  CHECK_FALSE(t.steps[1].mismatch.empty());
  CHECK(t.steps[1].from == "N2");
}

TEST_CASE("objects without messages are accepted trivially") {
  const DomainTheory dt = load_dt("refine/theory.dt");
  const auto sd = parse_sd("sd S\nobjects Env, Ctl, Idle\nmsg 1 Env -> Ctl : e1\n");
  const auto t = replay(sd, "Idle", load_sc("refine/original.sc"), dt);
  CHECK(t.accepted);
  CHECK(t.steps.empty());
  CHECK(t.consumed == 0);
}

TEST_CASE("guards with undetermined cells") {
  const DomainTheory& dt = guard_theory();
  ReplayOptions strict;
  strict.strict_guards = true;
  SUBCASE("unknown passes unless strict") {
    const auto sd = parse_sd("sd S\nobjects A, B\nmsg 1 A -> B : m0\n");
    CHECK(replay(sd, "B", guard_chart(), dt).accepted);
    CHECK_FALSE(replay(sd, "B", guard_chart(), dt, strict).accepted);
  }
  SUBCASE("known true passes") {
    const auto sd = parse_sd("sd S\nobjects A, B\nmsg 1 A -> B : on\nmsg 2 A -> B : m0\n");
    CHECK(replay(sd, "B", guard_chart(), dt).accepted);
    CHECK(replay(sd, "B", guard_chart(), dt, strict).accepted);
  }
  SUBCASE("known false fails") {
    const auto sd = parse_sd("sd S\nobjects A, B\nmsg 1 A -> B : off\nmsg 2 A -> B : m0\n");
    CHECK_FALSE(replay(sd, "B", guard_chart(), dt).accepted);
    CHECK_FALSE(replay(sd, "B", guard_chart(), dt, strict).accepted);
  }
}

TEST_CASE("replay agrees with a subset simulation on synthesized charts") {
  Generator gen(91);
  GenLimits lim;
  lim.max_messages = 8;
  int n = 0;
  for (int i = 0; i < 150; ++i) {
    const DomainTheory dt = gen.theory(lim);
    const auto a = gen.clean_sd(dt, lim, "A"), b = gen.clean_sd(dt, lim, "B");
    if (!a || !b) continue;
    const std::vector<SequenceDiagram> sds{*a};
    const auto syn = synthesize(dt, sds);
    for (const auto& [object, chart] : syn.charts) {
      if (std::find(b->objects.begin(), b->objects.end(), object) == b->objects.end()) continue;
      const Statechart flat = to_statechart(syn.flat.at(object), dt);
      REQUIRE(replay(*a, object, chart, dt).accepted);
      REQUIRE(replay(*b, object, chart, dt).accepted == oracle_accepts(flat, *b, object));
      ++n;
    }
  }
  CHECK(n > 100);
}

TEST_CASE("repair candidates start with theory contexts") {
  const DomainTheory dt = load_dt("refine/theory.dt");
  const auto c = repair_candidates(load_sd("refine/sd.sd"), "Ctl", load_sc("refine/edited.sc"), dt);
  REQUIRE(c.size() >= 8);
  CHECK(c[0].label == "e1");
  CHECK(c[0].sender == "Env");
  CHECK(c[0].receiver == "Ctl");
  CHECK(c[1].label == "e1");
  CHECK(c[1].sender == "Ctl");
  // e3 appears nowhere in the diagram; its partner defaults to the first other object.
  CHECK(c[4].label == "e3");
  CHECK(c[4].sender == "Env");
  bool has_action = false;
  for (const auto& m : c) has_action |= m.label == "a3" && m.sender == "Ctl";
  CHECK(has_action);
}

TEST_CASE("apply_edits renumbers and moves no-loop spans") {
  SequenceDiagram sd = load_sd("refine/sd.sd");
  sd.no_loops.push_back({3, 5});
  const Message ins{0, "e3", {}, "Env", "Ctl"};
  const auto d = apply_edits(sd, {{RepairEdit::Kind::Delete, 0, {}}, {RepairEdit::Kind::Insert, 3, ins}});
  REQUIRE(d.messages.size() == 6);
  for (std::size_t i = 0; i < d.messages.size(); ++i) CHECK(d.messages[i].id == static_cast<int>(i) + 1);
  CHECK(d.messages[0].label == "a1");
  CHECK(d.messages[2].label == "e3");
  CHECK(d.messages[3].label == "a3");
  REQUIRE(d.no_loops.size() == 1);
  CHECK(d.no_loops[0].first == 2);
  CHECK(d.no_loops[0].last == 5);
  CHECK_NOTHROW(d.validate());
}

TEST_CASE("repair") {
  const DomainTheory dt = load_dt("refine/theory.dt");
  const Statechart original = load_sc("refine/original.sc"), edited = load_sc("refine/edited.sc");

  SUBCASE("nothing to do") {
    const auto r = repair(load_sd("refine/sd.sd"), "Ctl", original, dt);
    CHECK(r.cost == 0);
    CHECK(r.edits.empty());
    CHECK(r.annotation_ok);
  }
  SUBCASE("the refined chart needs one inserted reception") {
    const auto sd = load_sd("refine/sd.sd");
    const auto r = repair(sd, "Ctl", edited, dt);
    CHECK(r.cost == 1);
    REQUIRE(r.edits.size() == 1);
    CHECK(r.edits[0].kind == RepairEdit::Kind::Insert);
    CHECK(r.edits[0].position == 3);
    CHECK(r.edits[0].message.label == "e3");
    CHECK(r.edits[0].message.sender == "Env");
    CHECK(r.repaired.messages[3].label == "e3");
    CHECK(r.repaired.messages[3].id == 4);
    CHECK(r.annotation_ok);
    CHECK(r.affected_objects == std::vector<std::string>{"Env"});
    CHECK(replay(r.repaired, "Ctl", edited, dt).accepted);
    CHECK(brute_force_min_cost(sd, "Ctl", edited, dt, repair_candidates(sd, "Ctl", edited, dt), 2, true) == 1);
  }
  SUBCASE("two strays need two deletions") {
    const auto sd = with_strays();
    const auto universe = repair_candidates(sd, "Ctl", original, dt);
    CHECK(brute_force_min_cost(sd, "Ctl", original, dt, universe, 3, true) == 2);
    RepairOptions one;
    one.max_edits = 1;
    try {
      repair(sd, "Ctl", original, dt, one);
      FAIL("expected no repair within one edit");
    } catch (const NoRepairWithinBound& e) {
      CHECK(e.max_edits() == 1);
      CHECK_FALSE(e.frontier().accepted);
      CHECK(e.frontier().consumed >= 2);
    }
    std::optional<RepairResult> first;
    for (int bound = 2; bound <= 4; ++bound) {
      RepairOptions o;
      o.max_edits = bound;
      const auto r = repair(sd, "Ctl", original, dt, o);
      CHECK(r.cost == 2);
      REQUIRE(r.edits.size() == 2);
      CHECK(r.edits[0] == RepairEdit{RepairEdit::Kind::Delete, 2, {}});
      CHECK(r.edits[1] == RepairEdit{RepairEdit::Kind::Delete, 5, {}});
      if (first) CHECK(first->edits == r.edits);
      first = r;
    }
  }
  SUBCASE("a zero bound only accepts accepted diagrams") {
    RepairOptions zero;
    zero.max_edits = 0;
    CHECK_THROWS_AS(repair(load_sd("refine/sd.sd"), "Ctl", edited, dt, zero), NoRepairWithinBound);
    CHECK(repair(load_sd("refine/sd.sd"), "Ctl", original, dt, zero).cost == 0);
  }
}

TEST_CASE("repair on a diagram that already has conflicts only needs replay") {
  const DomainTheory dt = load_dt("refine/theory.dt");
  // e2 right after e4 contradicts Phase; the chart knows only e4.
  const auto sd = parse_sd("sd C\nobjects Env, Ctl\nmsg 1 Env -> Ctl : e4\nmsg 2 Env -> Ctl : e2\n");
  REQUIRE_FALSE(annotate(sd, dt).conflicts.empty());
  const Statechart chart = parse_sc("statechart Ctl\nstate A\nstate B\ninitial A\nA -> B : e4\n");
  const auto r = repair(sd, "Ctl", chart, dt);
  CHECK_FALSE(r.annotation_ok);
  CHECK(r.cost == 1);
  CHECK(r.edits[0] == RepairEdit{RepairEdit::Kind::Delete, 1, {}});
}

TEST_CASE("check_all visits every charted object of every diagram") {
  const DomainTheory dt = load_dt("refine/theory.dt");
  std::map<std::string, Statechart> charts{{"Ctl", load_sc("refine/edited.sc")}, {"Ghost", load_sc("refine/original.sc")}};
  const std::vector<SequenceDiagram> sds{load_sd("refine/sd.sd")};
  const auto entries = check_all(dt, charts, sds);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].object == "Ctl");
  CHECK(entries[0].sd_name == "Refine");
  CHECK_FALSE(entries[0].trace.accepted);
  REQUIRE(entries[0].repair);
  CHECK(entries[0].repair->cost == 1);
  CHECK_FALSE(entries[0].repair_frontier);

  RepairOptions zero;
  zero.max_edits = 0;
  const auto bounded = check_all(dt, charts, sds, zero);
  REQUIRE(bounded.size() == 1);
  CHECK_FALSE(bounded[0].repair);
  CHECK(bounded[0].repair_frontier);

  charts["Ctl"] = load_sc("refine/original.sc");
  const auto clean = check_all(dt, charts, sds);
  REQUIRE(clean.size() == 1);
  CHECK(clean[0].trace.accepted);
  CHECK_FALSE(clean[0].repair);
}

TEST_CASE("repair matches brute force on small mutations") {
  Generator gen(2024);
  GenLimits lim;
  lim.max_vars = 2;
  lim.max_contexts = 3;
  lim.max_objects = 2;
  lim.max_messages = 4;
  int n = 0;
  for (int attempt = 0; attempt < 2000 && n < 60; ++attempt) {
    const DomainTheory dt = gen.theory(lim);
    const auto sd = gen.clean_sd(dt, lim, "M");
    if (!sd) continue;
    const auto syn = synthesize(dt, std::vector<SequenceDiagram>{*sd});
    const std::string object = sd->objects[0];
    const Statechart& chart = syn.charts.at(object);
    const Statechart flat = to_statechart(syn.flat.at(object), dt);
    SequenceDiagram mutated = *sd;
    if (mutated.messages.size() < 2) continue;
    mutated.messages.erase(mutated.messages.begin() + gen.pick(0, static_cast<int>(mutated.messages.size()) - 1));
    mutated = renumbered(mutated);
    if (oracle_accepts(flat, mutated, object)) continue;
    const bool strict = oracle_conflict_free(mutated, dt);
    const auto truth =
        brute_force_min_cost(mutated, object, flat, dt, repair_candidates(mutated, object, chart, dt), 2, strict);
    RepairOptions o;
    o.max_edits = 2;
    if (!truth) {
      CHECK_THROWS_AS(repair(mutated, object, chart, dt, o), NoRepairWithinBound);
      continue;
    }
    const auto r = repair(mutated, object, chart, dt, o);
    REQUIRE(static_cast<int>(r.cost) == *truth);
    ++n;
  }
  CHECK(n >= 30);
}
