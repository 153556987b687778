#pragma once

// Shared test helpers: fixture access, random generators and independent
// oracles (trace acceptance, brute-force minimal repair).

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sdebug/annotator.hpp"
#include "sdebug/checker.hpp"
#include "sdebug/dsl.hpp"
#include "sdebug/model.hpp"
#include "sdebug/synthesizer.hpp"

namespace testing {

using namespace sdebug;

inline std::string fixture_path(const std::string& rel) { return std::string(SDEBUG_FIXTURES) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline DomainTheory load_dt(const std::string& rel) { return parse_domain_theory(slurp(fixture_path(rel)), rel); }
inline SequenceDiagram load_sd(const std::string& rel) { return parse_sd(slurp(fixture_path(rel)), rel); }
inline Statechart load_sc(const std::string& rel) { return parse_sc(slurp(fixture_path(rel)), rel); }

/// Cells from `<F,?,1,none>` notation, resolved against the theory.
inline Cells cells_of(const DomainTheory& dt, std::string text) {
  text = text.substr(1, text.size() - 2);
  Cells out;
  std::stringstream ss(text);
  std::string item;
  for (std::size_t i = 0; std::getline(ss, item, ','); ++i) {
    if (item == "?") {
      out.push_back(CellValue::unknown());
    } else {
      out.push_back(CellValue::known(*dt.variables().at(i).domain.parse_literal(item)));
    }
  }
  return out;
}

inline std::string collapse_spaces(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == '\t') {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      out += c;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  if (!out.empty() && out.front() == ' ') out.erase(0, 1);
  return out;
}

inline std::vector<std::string> normalized_lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    line = collapse_spaces(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random generation

struct GenLimits {
  int max_vars = 6;
  int max_contexts = 4;
  int max_objects = 3;
  int max_messages = 10;
  double param_chance = 0.2;
  double unspecified_chance = 0.15;
};

class Generator {
 public:
  explicit Generator(unsigned seed) : rng_(seed) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937& rng() { return rng_; }

  VarDomain domain() {
    switch (pick(0, 2)) {
      case 0: return VarDomain::boolean();
      case 1: {
        const int lo = pick(0, 1);
        return VarDomain::range(lo, lo + pick(1, 2));
      }
      default: {
        std::vector<std::string> labels{"a", "b", "c"};
        labels.resize(static_cast<std::size_t>(pick(2, 3)));
        return VarDomain::enumeration(labels);
      }
    }
  }

  std::string literal(const VarDomain& d) {
    const auto codes = d.codes();
    return d.literal(codes[static_cast<std::size_t>(pick(0, static_cast<int>(codes.size()) - 1))]);
  }

  DomainTheory theory(const GenLimits& lim) {
    std::vector<StateVariable> vars;
    const int nv = pick(1, lim.max_vars);
    for (int i = 0; i < nv; ++i) vars.push_back({"v" + std::to_string(i), domain(), static_cast<std::size_t>(i)});
    std::vector<MessageSpec> specs;
    const int nc = pick(1, lim.max_contexts);
    for (int c = 0; c < nc; ++c) {
      MessageSpec s;
      s.name = "m" + std::to_string(c);
      std::optional<std::size_t> bound;
      if (chance(lim.param_chance)) {
        bound = static_cast<std::size_t>(pick(0, nv - 1));
        s.params.push_back({"P", vars[*bound].domain});
      }
      for (const auto& v : vars) {
        if (chance(0.3)) s.pre.atoms.push_back({v.name, literal(v.domain)});
        if (bound && v.index == *bound) {
          s.post.atoms.push_back({v.name, "P"});
        } else if (chance(0.4)) {
          s.post.atoms.push_back({v.name, literal(v.domain)});
        }
      }
      specs.push_back(std::move(s));
    }
    return DomainTheory(std::move(vars), std::move(specs));
  }

  SequenceDiagram sd(const DomainTheory& dt, const GenLimits& lim, const std::string& name = "R") {
    SequenceDiagram sd;
    sd.name = name;
    const int no = pick(1, lim.max_objects);
    for (int i = 0; i < no; ++i) sd.objects.push_back("o" + std::to_string(i));
    const int nm = pick(1, lim.max_messages);
    for (int i = 0; i < nm; ++i) {
      Message m;
      m.id = i + 1;
      m.sender = sd.objects[static_cast<std::size_t>(pick(0, no - 1))];
      m.receiver = sd.objects[static_cast<std::size_t>(pick(0, no - 1))];
      if (no > 1 && m.sender == m.receiver && chance(0.7)) {
        m.receiver = sd.objects[(static_cast<std::size_t>(pick(0, no - 2)) + 1 +
                                 static_cast<std::size_t>(std::find(sd.objects.begin(), sd.objects.end(), m.sender) -
                                                          sd.objects.begin())) %
                                static_cast<std::size_t>(no)];
      }
      if (chance(lim.unspecified_chance)) {
        m.label = "u" + std::to_string(pick(0, 1));
      } else {
        const auto& spec = dt.specs()[static_cast<std::size_t>(pick(0, static_cast<int>(dt.specs().size()) - 1))];
        m.label = spec.name;
        for (const auto& p : spec.params) m.args.push_back(literal(p.domain));
      }
      sd.messages.push_back(std::move(m));
    }
    return sd;
  }

  /// Random diagram that annotates without conflicts (rejection sampling).
  std::optional<SequenceDiagram> clean_sd(const DomainTheory& dt, const GenLimits& lim, const std::string& name,
                                          int tries = 200) {
    for (int t = 0; t < tries; ++t) {
      auto d = sd(dt, lim, name);
      if (annotate(d, dt).conflicts.empty()) return d;
    }
    return std::nullopt;
  }

  Statechart chart(int max_states, int max_edges) {
    Statechart sc;
    sc.object = "o0";
    const int ns = pick(1, max_states);
    for (int i = 0; i < ns; ++i) sc.states.push_back({"S" + std::to_string(i), chance(0.3) ? "<a,?>" : "", {}, {}, {}});
    sc.initial = "S0";
    const int ne = pick(0, max_edges);
    for (int i = 0; i < ne; ++i) {
      Transition t;
      t.from = "S" + std::to_string(pick(0, ns - 1));
      t.to = "S" + std::to_string(pick(0, ns - 1));
      t.event = chance(0.15) ? "" : "e" + std::to_string(pick(0, 3));
      if (chance(0.2)) t.guard = Condition{{{"v0", "T"}}};
      for (int a = pick(0, 2); a > 0; --a) t.actions.push_back("a" + std::to_string(pick(0, 3)));
      if (t.event.empty() && !t.guard && t.actions.empty()) t.actions.push_back("a0");
      sc.transitions.push_back(std::move(t));
    }
    return sc;
  }

 private:
  std::mt19937 rng_;
};

// ---------------------------------------------------------------------------
// Independent oracles

/// The object's view of the diagram: (event, actions) per step, written
/// without the library's lifeline code.
inline std::vector<std::pair<std::string, std::vector<std::string>>> projection(const SequenceDiagram& sd,
                                                                               const std::string& object) {
  std::vector<std::pair<std::string, std::vector<std::string>>> steps;
  for (const auto& m : sd.messages) {
    if (m.sender == object) {
      if (steps.empty()) steps.push_back({"", {}});
      steps.back().second.push_back(m.text());
    }
    if (m.receiver == object) steps.push_back({m.text(), {}});
  }
  return steps;
}

/// Subset simulation of a flat chart with string-labeled, guard-free edges.
inline bool oracle_accepts(const FlatChart& chart, const SequenceDiagram& sd, const std::string& object) {
  if (chart.empty()) return projection(sd, object).empty();
  std::set<std::size_t> current{*chart.initial};
  for (const auto& [event, actions] : projection(sd, object)) {
    std::set<std::size_t> next;
    for (const auto& e : chart.edges) {
      if (current.count(e.from) && e.event == event && e.actions == actions) next.insert(e.to);
    }
    if (next.empty()) return false;
    current = std::move(next);
  }
  return true;
}

/// Same acceptance on a statechart that has no composites or guards.
inline bool oracle_accepts(const Statechart& chart, const SequenceDiagram& sd, const std::string& object) {
  std::set<std::string> current{chart.initial};
  for (const auto& [event, actions] : projection(sd, object)) {
    std::set<std::string> next;
    for (const auto& t : chart.transitions) {
      if (current.count(t.from) && t.event == event && t.actions == actions) next.insert(t.to);
    }
    if (next.empty()) return false;
    current = std::move(next);
  }
  return true;
}

inline bool oracle_conflict_free(const SequenceDiagram& sd, const DomainTheory& dt) {
  try {
    return annotate(sd, dt).conflicts.empty();
  } catch (const AnnotationError&) {
    return false;
  }
}

inline SequenceDiagram renumbered(SequenceDiagram sd) {
  for (std::size_t i = 0; i < sd.messages.size(); ++i) sd.messages[i].id = static_cast<int>(i) + 1;
  sd.no_loops.clear();
  return sd;
}

/// Breadth-first search over distinct diagrams reachable by single message
/// deletions and insertions from `universe`. Returns the least number of
/// edits giving an accepted (and, if required, conflict-free) diagram.
inline std::optional<int> brute_force_min_cost(const SequenceDiagram& sd, const std::string& object,
                                               const Statechart& flat_chart, const DomainTheory& dt,
                                               const std::vector<Message>& universe, int bound,
                                               bool require_conflict_free) {
  auto good = [&](const SequenceDiagram& d) {
    return oracle_accepts(flat_chart, d, object) && (!require_conflict_free || oracle_conflict_free(d, dt));
  };
  auto key = [](const SequenceDiagram& d) { return print_sd(d); };
  SequenceDiagram start = sd;
  start.no_loops.clear();
  if (good(start)) return 0;
  std::set<std::string> seen{key(start)};
  std::vector<SequenceDiagram> level{start};
  for (int cost = 1; cost <= bound; ++cost) {
    std::vector<SequenceDiagram> next;
    for (const auto& d : level) {
      const std::size_t n = d.messages.size();
      auto visit = [&](SequenceDiagram c) {
        c = renumbered(std::move(c));
        if (seen.insert(key(c)).second) next.push_back(std::move(c));
      };
      for (std::size_t i = 0; i < n; ++i) {
        SequenceDiagram c = d;
        c.messages.erase(c.messages.begin() + static_cast<std::ptrdiff_t>(i));
        visit(std::move(c));
      }
      for (std::size_t g = 0; g <= n; ++g) {
        for (const auto& m : universe) {
          SequenceDiagram c = d;
          c.messages.insert(c.messages.begin() + static_cast<std::ptrdiff_t>(g), m);
          visit(std::move(c));
        }
      }
    }
    for (const auto& c : next) {
      if (good(c)) return cost;
    }
    level = std::move(next);
  }
  return std::nullopt;
}

}  // namespace testing
