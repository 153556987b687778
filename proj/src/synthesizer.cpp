#include "sdebug/synthesizer.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace sdebug {

void FlatChart::add_edge(Edge e) {
  if (std::find(edges.begin(), edges.end(), e) == edges.end()) edges.push_back(std::move(e));
}

SynthesisError::SynthesisError(const std::string& what, std::vector<Conflict> conflicts)
    : std::runtime_error(what), conflicts_(std::move(conflicts)) {}

std::vector<std::string> LifelineStep::actions() const {
  std::vector<std::string> out;
  for (const auto& m : sent) out.push_back(m.text());
  return out;
}

std::vector<LifelineStep> lifeline_steps(const SequenceDiagram& sd, std::string_view object) {
  std::vector<LifelineStep> steps;
  std::size_t slot = 0;
  for (const auto& m : sd.messages) {
    if (m.sender == object) {
      if (steps.empty()) steps.push_back({std::nullopt, {}, slot, slot});
      steps.back().sent.push_back(m);
      steps.back().last_slot = slot;
      ++slot;
    }
    if (m.receiver == object) {
      steps.push_back({m, {}, slot, slot});
      ++slot;
    }
  }
  return steps;
}

FlatChart synth_object_chart(const AnnotatedSD& asd, const DomainTheory& dt, std::string_view object) {
  const Lifeline* l = asd.lifeline(object);
  if (!l) throw ModelError("object '" + std::string(object) + "' is not declared in " + asd.sd().name);
  std::vector<Conflict> mine;
  for (auto& c : detect_conflicts(asd, dt)) {
    if (c.object == object) mine.push_back(std::move(c));
  }
  if (!mine.empty()) {
    throw SynthesisError("object " + std::string(object) + " has unresolved conflicts in " + asd.sd().name,
                         std::move(mine));
  }

  FlatChart chart;
  chart.object = std::string(object);
  auto state_of = [&](const Cells& key) {
    auto it = std::find(chart.states.begin(), chart.states.end(), key);
    if (it != chart.states.end()) return static_cast<std::size_t>(it - chart.states.begin());
    chart.states.push_back(key);
    return chart.states.size() - 1;
  };

  const auto steps = lifeline_steps(asd.sd(), object);
  if (steps.empty()) {
    chart.initial = state_of(Cells(asd.width()));
    return chart;
  }
  chart.initial = state_of(l->slots[steps.front().first_slot].pre.cells());
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const std::size_t from = state_of(l->slots[steps[s].first_slot].pre.cells());
    const std::size_t to = s + 1 < steps.size() ? state_of(l->slots[steps[s + 1].first_slot].pre.cells())
                                                : state_of(l->slots[steps[s].last_slot].post.cells());
    chart.add_edge({from, to, steps[s].event(), steps[s].actions()});
  }
  return chart;
}

namespace {

// Keeps cells both rows agree on; used only to force initial states together.
Cells generalize(const Cells& a, const Cells& b) {
  Cells out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == b[j]) out[j] = a[j];
  }
  return out;
}

}  // namespace

FlatChart merge_charts(std::span<const FlatChart> charts) {
  struct Rep {
    Cells key;
    std::set<std::size_t> members;  // input charts already mapped here
  };
  FlatChart out;
  std::vector<Rep> reps;
  std::vector<std::vector<std::size_t>> map(charts.size());

  for (std::size_t c = 0; c < charts.size(); ++c) {
    const FlatChart& ch = charts[c];
    if (ch.empty()) continue;
    if (out.object.empty()) out.object = ch.object;
    const Cells& key = ch.states.at(*ch.initial);
    if (reps.empty()) {
      reps.push_back({key, {}});
    } else if (auto j = unify(reps[0].key, key)) {
      reps[0].key = *j;
    } else {
      reps[0].key = generalize(reps[0].key, key);
    }
    reps[0].members.insert(c);
  }
  if (reps.empty()) return out;

  for (std::size_t c = 0; c < charts.size(); ++c) {
    const FlatChart& ch = charts[c];
    map[c].assign(ch.states.size(), 0);
    for (std::size_t s = 0; s < ch.states.size(); ++s) {
      if (ch.initial && s == *ch.initial) continue;
      const Cells& key = ch.states[s];
      std::optional<std::size_t> target;
      for (std::size_t r = 0; r < reps.size() && !target; ++r) {
        if (!reps[r].members.count(c) && reps[r].key == key) target = r;
      }
      for (std::size_t r = 0; r < reps.size() && !target; ++r) {
        if (!reps[r].members.count(c) && unify(reps[r].key, key)) target = r;
      }
      if (!target) {
        reps.push_back({key, {}});
        target = reps.size() - 1;
      }
      reps[*target].key = *unify(reps[*target].key, key);
      reps[*target].members.insert(c);
      map[c][s] = *target;
    }
  }

  for (const auto& r : reps) out.states.push_back(r.key);
  out.initial = 0;
  for (std::size_t c = 0; c < charts.size(); ++c) {
    for (const auto& e : charts[c].edges) out.add_edge({map[c][e.from], map[c][e.to], e.event, e.actions});
  }
  return out;
}

namespace {

std::string state_name(std::size_t i) { return "N" + std::to_string(i + 1); }

Transition to_transition(const FlatChart::Edge& e, std::string from, std::string to) {
  return {std::move(from), std::move(to), e.event, std::nullopt, e.actions};
}

}  // namespace

Statechart to_statechart(const FlatChart& chart, const DomainTheory& dt) {
  if (chart.empty()) throw ModelError("cannot build a statechart without states");
  Statechart sc;
  sc.object = chart.object;
  for (std::size_t i = 0; i < chart.states.size(); ++i) {
    sc.states.push_back({state_name(i), render_cells(dt, chart.states[i]), {}, {}, {}});
  }
  sc.initial = state_name(*chart.initial);
  for (const auto& e : chart.edges) sc.transitions.push_back(to_transition(e, state_name(e.from), state_name(e.to)));
  return sc;
}

namespace {

// Region tree used while grouping: a leaf state or a composite of regions.
struct Group {
  std::optional<std::size_t> leaf;
  std::string name;
  std::size_t entry = 0;
  std::vector<Group> children;
};

class Grouper {
 public:
  explicit Grouper(const FlatChart& chart) : chart_(chart) {}

  std::vector<Group> run() {
    std::vector<std::size_t> all(chart_.states.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return group(all, *chart_.initial, {});
  }

 private:
  // Candidate nodes exclude the scope's initial and exit nodes. A region is
  // entered only at `entry`, left only from `exit`, and smaller than the
  // scope minus one node.
  std::vector<Group> group(const std::vector<std::size_t>& scope, std::size_t initial,
                           const std::set<std::size_t>& exits) {
    const std::set<std::size_t> in_scope(scope.begin(), scope.end());
    std::set<std::size_t> usable;
    for (std::size_t v : scope) {
      if (v != initial && !exits.count(v)) usable.insert(v);
    }

    struct Candidate {
      std::set<std::size_t> nodes;
      std::size_t entry;
      std::size_t exit;
    };
    std::vector<Candidate> found;
    for (std::size_t e : usable) {
      for (std::size_t x : usable) {
        if (e == x) continue;
        auto region = reach(e, x, usable);
        if (!region.count(x) || region.size() < 2 || region.size() + 1 >= scope.size()) continue;
        if (!single_entry_exit(region, e, x)) continue;
        found.push_back({std::move(region), e, x});
      }
    }
    std::stable_sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
      if (a.nodes.size() != b.nodes.size()) return a.nodes.size() > b.nodes.size();
      if (a.entry != b.entry) return a.entry < b.entry;
      return a.exit < b.exit;
    });

    std::vector<Candidate> chosen;
    std::set<std::size_t> taken;
    for (auto& c : found) {
      if (std::any_of(c.nodes.begin(), c.nodes.end(), [&](std::size_t v) { return taken.count(v); })) continue;
      taken.insert(c.nodes.begin(), c.nodes.end());
      chosen.push_back(std::move(c));
    }

    std::vector<Group> out;
    std::set<std::size_t> emitted;
    for (std::size_t v : scope) {
      if (emitted.count(v)) continue;
      auto it = std::find_if(chosen.begin(), chosen.end(), [&](const Candidate& c) { return c.nodes.count(v); });
      if (it == chosen.end()) {
        out.push_back({v, {}, v, {}});
        emitted.insert(v);
        continue;
      }
      Group g;
      g.name = "C" + std::to_string(++composites_);
      g.entry = it->entry;
      std::vector<std::size_t> inner;
      for (std::size_t u : scope) {
        if (it->nodes.count(u)) inner.push_back(u);
      }
      g.children = group(inner, it->entry, {it->exit});
      emitted.insert(it->nodes.begin(), it->nodes.end());
      out.push_back(std::move(g));
    }
    return out;
  }

  // Nodes reachable from `entry` inside `allowed` without leaving `exit`.
  std::set<std::size_t> reach(std::size_t entry, std::size_t exit, const std::set<std::size_t>& allowed) const {
    std::set<std::size_t> seen{entry};
    std::vector<std::size_t> work{entry};
    while (!work.empty()) {
      const std::size_t v = work.back();
      work.pop_back();
      if (v == exit) continue;
      for (const auto& e : chart_.edges) {
        if (e.from == v && allowed.count(e.to) && seen.insert(e.to).second) work.push_back(e.to);
      }
    }
    return seen;
  }

  bool single_entry_exit(const std::set<std::size_t>& region, std::size_t entry, std::size_t exit) const {
    for (const auto& e : chart_.edges) {
      const bool from_in = region.count(e.from) > 0;
      const bool to_in = region.count(e.to) > 0;
      if (!from_in && to_in && e.to != entry) return false;
      if (from_in && !to_in && e.from != exit) return false;
    }
    return true;
  }

  const FlatChart& chart_;
  int composites_ = 0;
};

void collect_leaves(const Group& g, std::set<std::size_t>& out) {
  if (g.leaf) {
    out.insert(*g.leaf);
    return;
  }
  for (const auto& c : g.children) collect_leaves(c, out);
}

struct Builder {
  const FlatChart& chart;
  const DomainTheory& dt;

  // Which composites (outermost first) enclose each leaf.
  std::map<std::size_t, std::vector<const Group*>> ancestry;

  void index(const std::vector<Group>& groups, std::vector<const Group*>& path) {
    for (const auto& g : groups) {
      if (g.leaf) {
        ancestry[*g.leaf] = path;
      } else {
        path.push_back(&g);
        index(g.children, path);
        path.pop_back();
      }
    }
  }

  std::vector<State> states(const std::vector<Group>& groups) const {
    std::vector<State> out;
    for (const auto& g : groups) {
      State s;
      if (g.leaf) {
        s.name = state_name(*g.leaf);
        s.comment = render_cells(dt, chart.states[*g.leaf]);
      } else {
        s.name = g.name;
        s.children = states(g.children);
        s.initial = initial_name(g.children, g.entry);
      }
      out.push_back(std::move(s));
    }
    return out;
  }

  static std::string initial_name(const std::vector<Group>& groups, std::size_t entry) {
    for (const auto& g : groups) {
      std::set<std::size_t> leaves;
      collect_leaves(g, leaves);
      if (leaves.count(entry)) return g.leaf ? state_name(*g.leaf) : g.name;
    }
    throw ModelError("region entry missing from its own region");
  }

  // Edge goes to the scope of the deepest composite enclosing both ends;
  // the target is the outermost composite entered by the edge, if any.
  void place(const FlatChart::Edge& e, Statechart& sc) const {
    const auto& pf = ancestry.at(e.from);
    const auto& pt = ancestry.at(e.to);
    std::size_t common = 0;
    while (common < pf.size() && common < pt.size() && pf[common] == pt[common]) ++common;
    const std::string target = common < pt.size() ? pt[common]->name : state_name(e.to);
    auto t = to_transition(e, state_name(e.from), target);
    if (common == 0) {
      sc.transitions.push_back(std::move(t));
      return;
    }
    State* scope = find(sc.states, pf[common - 1]->name);
    scope->transitions.push_back(std::move(t));
  }

  static State* find(std::vector<State>& states, const std::string& name) {
    for (auto& s : states) {
      if (s.name == name) return &s;
      if (State* hit = find(s.children, name)) return hit;
    }
    return nullptr;
  }
};

}  // namespace

Statechart introduce_hierarchy(const FlatChart& chart, const DomainTheory& dt) {
  if (chart.empty()) throw ModelError("cannot build a statechart without states");
  const auto groups = Grouper(chart).run();
  Builder b{chart, dt, {}};
  std::vector<const Group*> path;
  b.index(groups, path);
  Statechart sc;
  sc.object = chart.object;
  sc.states = b.states(groups);
  sc.initial = Builder::initial_name(groups, *chart.initial);
  for (const auto& e : chart.edges) b.place(e, sc);
  return sc;
}

std::vector<std::string> nondeterminism_warnings(const FlatChart& chart) {
  std::vector<std::string> out;
  std::map<std::pair<std::size_t, std::string>, std::size_t> count;
  for (const auto& e : chart.edges) ++count[{e.from, e.event}];
  std::set<std::pair<std::size_t, std::string>> reported;
  for (const auto& e : chart.edges) {
    const auto key = std::make_pair(e.from, e.event);
    if (count[key] > 1 && reported.insert(key).second) {
      out.push_back("object " + chart.object + ": state " + state_name(e.from) + " has " +
                    std::to_string(count[key]) + " transitions on " +
                    (e.event.empty() ? std::string("completion") : "event \"" + e.event + "\""));
    }
  }
  return out;
}

SynthesisResult synthesize(const DomainTheory& dt, std::span<const SequenceDiagram> sds, const AnnotationConfig& cfg) {
  SynthesisResult result;
  std::vector<AnnotatedSD> annotated;
  std::vector<Conflict> conflicts;
  for (const auto& sd : sds) {
    auto r = annotate(sd, dt, cfg);
    conflicts.insert(conflicts.end(), r.conflicts.begin(), r.conflicts.end());
    annotated.push_back(std::move(r.annotated));
  }
  if (!conflicts.empty()) throw SynthesisError("sequence diagrams have unresolved conflicts", std::move(conflicts));

  std::vector<std::string> objects;
  for (const auto& sd : sds) {
    for (const auto& o : sd.objects) {
      if (std::find(objects.begin(), objects.end(), o) == objects.end()) objects.push_back(o);
    }
  }
  for (const auto& o : objects) {
    std::vector<FlatChart> per_sd;
    for (const auto& asd : annotated) {
      if (asd.sd().has_object(o)) per_sd.push_back(synth_object_chart(asd, dt, o));
    }
    FlatChart merged = merge_charts(per_sd);
    auto w = nondeterminism_warnings(merged);
    result.warnings.insert(result.warnings.end(), w.begin(), w.end());
    result.charts[o] = introduce_hierarchy(merged, dt);
    result.flat[o] = std::move(merged);
  }
  return result;
}

}  // namespace sdebug
