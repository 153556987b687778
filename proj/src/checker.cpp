#include "sdebug/checker.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "sdebug/dsl.hpp"
#include "sdebug/synthesizer.hpp"

namespace sdebug {

NoRepairWithinBound::NoRepairWithinBound(int max_edits, ReplayTrace frontier, std::vector<RepairEdit> frontier_edits)
    : std::runtime_error("no repair within " + std::to_string(max_edits) + " edits for " + frontier.sd_name +
                         ", object " + frontier.object),
      max_edits_(max_edits),
      frontier_(std::move(frontier)),
      frontier_edits_(std::move(frontier_edits)) {}

namespace {

Transition as_transition(const FlatMachine& fm, const FlatMachine::Edge& e) {
  return {fm.states[e.from], fm.states[e.to], e.event, e.guard, e.actions};
}

std::string quoted_list(const std::vector<std::string>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
  return s + "]";
}

std::string describe_event(const std::string& event) {
  return event.empty() ? std::string("a completion transition") : "event \"" + event + "\"";
}

bool is_prefix(const std::vector<std::string>& p, const std::vector<std::string>& of) {
  return p.size() <= of.size() && std::equal(p.begin(), p.end(), of.begin());
}

std::size_t common_prefix(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  return k;
}

class Replayer {
 public:
  Replayer(const SequenceDiagram& sd, std::string_view object, const Statechart& chart, const DomainTheory& dt,
           const ReplayOptions& opts)
      : sd_(sd), object_(object), fm_(flatten(chart)), dt_(dt), opts_(opts), steps_(lifeline_steps(sd, object)) {
    offsets_.resize(steps_.size() + 1, 0);
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      offsets_[i + 1] = offsets_[i] + (steps_[i].received ? 1 : 0) + steps_[i].sent.size();
    }
  }

  ReplayTrace run() {
    ReplayTrace trace;
    trace.sd_name = sd_.name;
    trace.object = std::string(object_);
    std::vector<std::size_t> path;
    if (dfs(fm_.initial, 0, path)) {
      fill(trace, path);
      trace.consumed = offsets_.back();
      return trace;
    }
    fill(trace, best_path_);
    const std::size_t k = best_path_.size();
    ReplayStep failed{steps_[k].received, steps_[k].sent, fm_.states[best_state_], {}, {}, best_reason_};
    trace.steps.push_back(std::move(failed));
    trace.accepted = false;
    trace.rejected_at = k;
    trace.consumed = best_progress_;
    return trace;
  }

 private:
  bool dfs(std::size_t state, std::size_t i, std::vector<std::size_t>& path) {
    if (i == steps_.size()) return true;
    if (dead_.count({state, i})) return false;
    const LifelineStep& step = steps_[i];
    const std::string event = step.event();
    const auto actions = step.actions();
    bool any_event = false;
    for (std::size_t k = 0; k < fm_.edges.size(); ++k) {
      const auto& e = fm_.edges[k];
      if (e.from != state || e.event != event) continue;
      any_event = true;
      const std::size_t base = offsets_[i] + (step.received ? 1 : 0);
      if (e.guard && !guard_holds(*e.guard, step)) {
        note(state, i, path, offsets_[i],
             "guard [" + print_condition(*e.guard) + "] of " + fm_.states[e.from] + " -> " + fm_.states[e.to] +
                 " does not hold");
        continue;
      }
      if (e.actions != actions) {
        note(state, i, path, base + common_prefix(e.actions, actions),
             "transition " + fm_.states[e.from] + " -> " + fm_.states[e.to] + " on " + describe_event(event) +
                 " sends " + quoted_list(e.actions) + " but the diagram sends " + quoted_list(actions));
        continue;
      }
      path.push_back(k);
      if (dfs(e.to, i + 1, path)) return true;
      path.pop_back();
    }
    if (!any_event) {
      note(state, i, path, offsets_[i], "no transition from " + fm_.states[state] + " on " + describe_event(event));
    }
    dead_.insert({state, i});
    return false;
  }

  void note(std::size_t state, std::size_t, const std::vector<std::size_t>& path, std::size_t progress,
            std::string reason) {
    if (have_best_ && progress <= best_progress_) return;
    have_best_ = true;
    best_progress_ = progress;
    best_state_ = state;
    best_path_ = path;
    best_reason_ = std::move(reason);
  }

  void fill(ReplayTrace& trace, const std::vector<std::size_t>& path) const {
    for (std::size_t i = 0; i < path.size(); ++i) {
      const auto& e = fm_.edges[path[i]];
      trace.steps.push_back(
          {steps_[i].received, steps_[i].sent, fm_.states[e.from], fm_.states[e.to], as_transition(fm_, e), {}});
    }
  }

  bool guard_holds(const Condition& guard, const LifelineStep& step) {
    const CellValue* cells = nullptr;
    if (const AnnotatedSD* asd = annotation()) {
      if (const Lifeline* l = asd->lifeline(object_)) cells = l->slots[step.first_slot].pre.cells().data();
    }
    for (const auto& atom : guard.atoms) {
      const StateVariable* v = dt_.find_variable(atom.variable);
      if (!v) return false;
      const auto code = v->domain.parse_literal(atom.value);
      if (!code) return false;
      const CellValue cell = cells ? cells[v->index] : CellValue{};
      if (!cell.is_known()) {
        if (opts_.strict_guards) return false;
        continue;
      }
      if (cell.value() != *code) return false;
    }
    return true;
  }

  const AnnotatedSD* annotation() {
    if (!annotation_tried_) {
      annotation_tried_ = true;
      try {
        annotation_ = annotate(sd_, dt_).annotated;
      } catch (const AnnotationError&) {
        annotation_.reset();
      }
    }
    return annotation_ ? &*annotation_ : nullptr;
  }

  const SequenceDiagram& sd_;
  std::string_view object_;
  FlatMachine fm_;
  const DomainTheory& dt_;
  ReplayOptions opts_;
  std::vector<LifelineStep> steps_;
  std::vector<std::size_t> offsets_;
  std::set<std::pair<std::size_t, std::size_t>> dead_;

  bool annotation_tried_ = false;
  std::optional<AnnotatedSD> annotation_;

  bool have_best_ = false;
  std::size_t best_progress_ = 0;
  std::size_t best_state_ = 0;
  std::vector<std::size_t> best_path_;
  std::string best_reason_;
};

// Could some run still consume `steps` if more sends were appended to the
// last one? Guards are ignored, so a false answer is definitive.
bool viable_prefix(const FlatMachine& fm, const std::vector<LifelineStep>& steps) {
  std::set<std::size_t> current{fm.initial};
  for (std::size_t i = 0; i < steps.size() && !current.empty(); ++i) {
    const bool last = i + 1 == steps.size();
    const std::string event = steps[i].event();
    const auto actions = steps[i].actions();
    std::set<std::size_t> next;
    for (const auto& e : fm.edges) {
      if (!current.count(e.from) || e.event != event) continue;
      if (last ? is_prefix(actions, e.actions) : e.actions == actions) next.insert(e.to);
    }
    current = std::move(next);
  }
  return !current.empty();
}

Message parse_message_text(const std::string& text) {
  Message m;
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') {
    m.label = text;
    return m;
  }
  m.label = text.substr(0, open);
  while (!m.label.empty() && m.label.back() == ' ') m.label.pop_back();
  std::string inner = text.substr(open + 1, text.size() - open - 2);
  std::size_t start = 0;
  while (start <= inner.size()) {
    auto comma = inner.find(',', start);
    if (comma == std::string::npos) comma = inner.size();
    std::string arg = inner.substr(start, comma - start);
    arg.erase(0, arg.find_first_not_of(' '));
    arg.erase(arg.find_last_not_of(' ') + 1);
    if (!arg.empty()) m.args.push_back(arg);
    start = comma + 1;
  }
  return m;
}

}  // namespace

ReplayTrace replay(const SequenceDiagram& sd, std::string_view object, const Statechart& chart,
                   const DomainTheory& dt, const ReplayOptions& opts) {
  return Replayer(sd, object, chart, dt, opts).run();
}

std::vector<Message> repair_candidates(const SequenceDiagram& sd, std::string_view object, const Statechart& chart,
                                       const DomainTheory& dt) {
  const std::string self(object);
  auto partner_for = [&](const std::string& label) {
    for (const auto& m : sd.messages) {
      if (!equal_ignore_case(m.label, label)) continue;
      if (m.sender == self) return m.receiver;
      if (m.receiver == self) return m.sender;
    }
    for (const auto& o : sd.objects) {
      if (o != self) return o;
    }
    return self;
  };

  std::vector<Message> out;
  std::set<std::string> received, sent;
  auto add = [&](Message m, bool receive) {
    auto& seen = receive ? received : sent;
    if (!seen.insert(m.text()).second) return;
    const std::string partner = partner_for(m.label);
    m.sender = receive ? partner : self;
    m.receiver = receive ? self : partner;
    out.push_back(std::move(m));
  };

  for (const auto& spec : dt.specs()) {
    for (auto& args : ground_arguments(spec)) {
      Message m{0, spec.name, std::move(args), {}, {}};
      add(m, true);
      add(std::move(m), false);
    }
  }
  const FlatMachine fm = flatten(chart);
  for (const auto& e : fm.edges) {
    if (!e.event.empty()) add(parse_message_text(e.event), true);
  }
  for (const auto& e : fm.edges) {
    for (const auto& a : e.actions) add(parse_message_text(a), false);
  }
  return out;
}

SequenceDiagram apply_edits(const SequenceDiagram& sd, const std::vector<RepairEdit>& edits) {
  const std::size_t n = sd.messages.size();
  std::vector<bool> deleted(n, false);
  std::vector<std::vector<Message>> inserts(n + 1);
  for (const auto& e : edits) {
    if (e.kind == RepairEdit::Kind::Delete) {
      if (e.position >= n || deleted[e.position]) throw ModelError("invalid delete position");
      deleted[e.position] = true;
    } else {
      if (e.position > n) throw ModelError("invalid insert position");
      inserts[e.position].push_back(e.message);
    }
  }

  SequenceDiagram out;
  out.name = sd.name;
  out.objects = sd.objects;
  std::vector<int> new_id(n, 0);
  auto push = [&](Message m) {
    m.id = static_cast<int>(out.messages.size()) + 1;
    out.messages.push_back(std::move(m));
  };
  for (std::size_t g = 0; g <= n; ++g) {
    for (const auto& m : inserts[g]) push(m);
    if (g < n && !deleted[g]) {
      push(sd.messages[g]);
      new_id[g] = out.messages.back().id;
    }
  }
  for (const auto& nl : sd.no_loops) {
    int lo = 0, hi = 0;
    for (int id = nl.first; id <= nl.last; ++id) {
      if (id < 1 || static_cast<std::size_t>(id) > n) continue;
      const int mapped = new_id[static_cast<std::size_t>(id - 1)];
      if (!mapped) continue;
      if (!lo) lo = mapped;
      hi = mapped;
    }
    if (lo) out.no_loops.push_back({lo, hi});
  }
  return out;
}

namespace {

bool conflict_free(const SequenceDiagram& sd, const DomainTheory& dt, const AnnotationConfig& cfg) {
  try {
    return annotate(sd, dt, cfg).conflicts.empty();
  } catch (const AnnotationError&) {
    return false;
  }
}

class RepairSearch {
 public:
  RepairSearch(const SequenceDiagram& sd, std::string_view object, const Statechart& chart, const DomainTheory& dt,
               const RepairOptions& opts)
      : sd_(sd),
        object_(object),
        chart_(chart),
        dt_(dt),
        opts_(opts),
        fm_(flatten(chart)),
        candidates_(repair_candidates(sd, object, chart, dt)),
        require_annotation_(conflict_free(sd, dt, opts.annotation)) {}

  std::optional<RepairResult> run() {
    for (int d = 0; d <= opts_.max_edits; ++d) {
      std::vector<RepairEdit> edits;
      if (dfs(d, edits)) return result(edits);
    }
    return std::nullopt;
  }

  [[noreturn]] void fail() const {
    throw NoRepairWithinBound(opts_.max_edits, frontier_ ? *frontier_ : replay(sd_, object_, chart_, dt_, opts_.replay),
                              frontier_edits_);
  }

 private:
  bool dfs(int left, std::vector<RepairEdit>& edits) {
    if (left == 0) return accept(edits);
    const std::size_t n = sd_.messages.size();
    std::size_t start = 0;
    bool only_inserts_at_start = false;
    if (!edits.empty()) {
      start = edits.back().position;
      only_inserts_at_start = true;  // no second delete at one position, no delete after an insert there
    }
    for (std::size_t p = start; p <= n; ++p) {
      const bool inserts_only = only_inserts_at_start && p == start;
      if (!inserts_only && p < n) {
        edits.push_back({RepairEdit::Kind::Delete, p, {}});
        if (viable(edits, p) && dfs(left - 1, edits)) return true;
        edits.pop_back();
      }
      for (const auto& c : candidates_) {
        edits.push_back({RepairEdit::Kind::Insert, p, c});
        if (viable(edits, p) && dfs(left - 1, edits)) return true;
        edits.pop_back();
      }
    }
    return false;
  }

  // Messages before original position p can no longer change.
  bool viable(const std::vector<RepairEdit>& edits, std::size_t p) const {
    SequenceDiagram prefix;
    prefix.name = sd_.name;
    prefix.objects = sd_.objects;
    prefix.messages.assign(sd_.messages.begin(), sd_.messages.begin() + static_cast<std::ptrdiff_t>(p));
    std::vector<RepairEdit> kept;
    for (const auto& e : edits) {
      if (e.kind == RepairEdit::Kind::Insert || e.position < p) kept.push_back(e);
    }
    return viable_prefix(fm_, lifeline_steps(apply_edits(prefix, kept), object_));
  }

  bool accept(const std::vector<RepairEdit>& edits) {
    SequenceDiagram candidate = apply_edits(sd_, edits);
    ReplayTrace trace = replay(candidate, object_, chart_, dt_, opts_.replay);
    if (!trace.accepted) {
      if (!frontier_ || trace.consumed > frontier_->consumed) {
        frontier_ = std::move(trace);
        frontier_edits_ = edits;
      }
      return false;
    }
    return !require_annotation_ || conflict_free(candidate, dt_, opts_.annotation);
  }

  RepairResult result(const std::vector<RepairEdit>& edits) const {
    RepairResult r;
    r.edits = edits;
    r.repaired = apply_edits(sd_, edits);
    r.cost = edits.size();
    r.annotation_ok = require_annotation_;
    std::set<std::string> touched;
    for (const auto& e : edits) {
      const Message& m = e.kind == RepairEdit::Kind::Insert ? e.message : sd_.messages[e.position];
      touched.insert(m.sender);
      touched.insert(m.receiver);
    }
    for (const auto& o : sd_.objects) {
      if (o != object_ && touched.count(o)) r.affected_objects.push_back(o);
    }
    return r;
  }

  const SequenceDiagram& sd_;
  std::string_view object_;
  const Statechart& chart_;
  const DomainTheory& dt_;
  const RepairOptions& opts_;
  FlatMachine fm_;
  std::vector<Message> candidates_;
  bool require_annotation_;
  std::optional<ReplayTrace> frontier_;
  std::vector<RepairEdit> frontier_edits_;
};

}  // namespace

RepairResult repair(const SequenceDiagram& sd, std::string_view object, const Statechart& chart,
                    const DomainTheory& dt, const RepairOptions& opts) {
  if (opts.max_edits < 0) throw ModelError("max-edits must be non-negative");
  RepairSearch search(sd, object, chart, dt, opts);
  if (auto r = search.run()) return *r;
  search.fail();
}

std::vector<CheckEntry> check_all(const DomainTheory& dt, const std::map<std::string, Statechart>& charts,
                                  const std::vector<SequenceDiagram>& sds, const RepairOptions& opts) {
  std::vector<CheckEntry> out;
  for (const auto& sd : sds) {
    for (const auto& object : sd.objects) {
      auto it = charts.find(object);
      if (it == charts.end()) continue;
      CheckEntry entry{sd.name, object, replay(sd, object, it->second, dt, opts.replay), {}, {}};
      if (!entry.trace.accepted) {
        try {
          entry.repair = repair(sd, object, it->second, dt, opts);
        } catch (const NoRepairWithinBound& e) {
          entry.repair_frontier = e.frontier();
        }
      }
      out.push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace sdebug
