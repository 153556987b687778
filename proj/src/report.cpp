#include "sdebug/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sdebug/dsl.hpp"

namespace sdebug {

namespace {

using nlohmann::json;

std::string plural(std::size_t n, const std::string& word) {
  return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string phase_word(Phase p) { return p == Phase::Post ? "after" : "before"; }

std::string vector_text(const AnnotatedSD& asd, const DomainTheory& dt, const VectorId& id) {
  return render_cells(dt, asd.vector(id).cells());
}

const AnnotatedSD* find_annotation(const ReportBundle& b, const std::string& sd) {
  for (const auto& a : b.annotations) {
    if (a.sd().name == sd) return &a;
  }
  return nullptr;
}

const SequenceDiagram* find_checked(const ReportBundle& b, const std::string& sd) {
  for (const auto& s : b.checked) {
    if (s.name == sd) return &s;
  }
  return nullptr;
}

/// Chain vectors other than the two that clash, first occurrence only.
std::vector<DerivationStep> derivation_lines(const Conflict& c) {
  std::vector<DerivationStep> out;
  std::set<VectorId> seen{c.after_vector, c.before_vector};
  for (const auto& d : c.derivation) {
    if (seen.insert(d.vector).second) out.push_back(d);
  }
  return out;
}

bool via_unification(const Conflict& c) {
  return std::any_of(c.derivation.begin(), c.derivation.end(),
                     [](const DerivationStep& d) { return d.via == DerivationStep::Via::Unified; });
}

std::string cell_text(const StateVariable& v, const CellValue& c) {
  return c.is_known() ? v.domain.literal(c.value()) : "?";
}

std::size_t unknown_cells(const AnnotatedSD& asd) {
  std::size_t n = 0;
  for (const auto& l : asd.lifelines()) {
    for (const auto& s : l.slots) {
      for (const auto* v : {&s.pre, &s.post}) {
        n += static_cast<std::size_t>(
            std::count_if(v->cells().begin(), v->cells().end(), [](const CellValue& c) { return !c.is_known(); }));
      }
    }
  }
  return n;
}

std::string step_label(const ReplayStep& s) {
  return s.received ? quoted(s.received->text()) : std::string("initial sends");
}

}  // namespace

std::vector<std::string> unspecified_message_warnings(const SequenceDiagram& sd, const DomainTheory& dt) {
  std::vector<std::string> out;
  for (const auto& m : sd.messages) {
    if (!dt.find_spec(m.label)) {
      out.push_back(sd.name + ": message " + std::to_string(m.id) + " (" + quoted(m.label) +
                    ") has no context in the domain theory");
    }
  }
  return out;
}

std::string render_conflict(const Conflict& c, const AnnotatedSD& asd, const DomainTheory& dt) {
  const std::string a = quoted(c.after_message.text());
  const std::string b = quoted(c.before_message.text());
  const std::size_t width = std::max(a.size(), b.size()) + 1;
  auto pad = [&](const std::string& s) { return s + std::string(width - s.size(), ' '); };

  std::ostringstream os;
  os << "Conflict in " << c.sd_name << ": Object " << c.object << "\n";
  os << " statevector after  " << pad(a) << "= " << vector_text(asd, dt, c.after_vector) << " [Msg "
     << c.after_message.id << "]\n";
  os << " statevector before " << pad(b) << "= " << vector_text(asd, dt, c.before_vector) << " [Msg "
     << c.before_message.id << "]\n";
  os << "  conflict in variable " << quoted(c.variable.name) << "\n";
  const auto lines = derivation_lines(c);
  if (!lines.empty()) {
    os << "  conflict occurred as consequence of " << (via_unification(c) ? "unification of" : "propagation from")
       << "\n";
  }
  for (const auto& d : lines) {
    const Message& m = asd.sd().message(d.vector.message);
    os << "   statevector " << phase_word(d.vector.phase) << " " << quoted(m.text()) << " = "
       << vector_text(asd, dt, d.vector) << " [Msg " << m.id << "]\n";
  }
  return os.str();
}

std::string render_repair_diff(const SequenceDiagram& original, const RepairResult& r) {
  const std::size_t n = original.messages.size();
  std::vector<bool> deleted(n, false);
  std::vector<std::size_t> inserts(n + 1, 0);
  for (const auto& e : r.edits) {
    if (e.kind == RepairEdit::Kind::Delete) {
      deleted.at(e.position) = true;
    } else {
      ++inserts.at(e.position);
    }
  }
  std::ostringstream os;
  os << "--- " << original.name << " (original)\n+++ " << original.name << " (repaired)\n";
  std::size_t next = 0;  // index into the repaired messages
  for (std::size_t g = 0; g <= n; ++g) {
    for (std::size_t k = 0; k < inserts[g]; ++k) os << "+ " << print_message_line(r.repaired.messages.at(next++)) << "\n";
    if (g == n) break;
    if (deleted[g]) {
      os << "- " << print_message_line(original.messages[g]) << "\n";
    } else {
      os << "  " << print_message_line(r.repaired.messages.at(next++)) << "\n";
    }
  }
  return os.str();
}

std::string render_text(const ReportBundle& bundle) {
  std::ostringstream os;
  const bool conflict_section = !bundle.annotations.empty() || bundle.checks.empty();
  if (conflict_section) {
    for (const auto& c : bundle.conflicts) {
      const AnnotatedSD* asd = find_annotation(bundle, c.sd_name);
      if (asd && bundle.theory) os << render_conflict(c, *asd, *bundle.theory) << "\n";
    }
    if (bundle.conflicts.empty()) os << "No conflicts found.\n";
    std::size_t messages = 0, unifications = 0;
    for (const auto& a : bundle.annotations) {
      messages += a.sd().messages.size();
      unifications += a.unifications().size();
    }
    os << "Summary: " << plural(bundle.annotations.size(), "sequence diagram") << ", " << plural(messages, "message")
       << ", " << plural(unifications, "unification") << ", " << plural(bundle.conflicts.size(), "conflict")
       << ".\n";
  }

  if (!bundle.checks.empty()) {
    if (conflict_section) os << "\n";
    std::size_t accepted = 0, repaired = 0;
    for (const auto& e : bundle.checks) {
      os << "Check " << e.sd_name << ": Object " << e.object << ": ";
      if (e.trace.accepted) {
        ++accepted;
        os << "accepted (" << plural(e.trace.steps.size(), "step") << ")\n";
        continue;
      }
      const ReplayStep& bad = e.trace.steps.back();
      os << "rejected at step " << e.trace.rejected_at + 1 << " (" << step_label(bad) << " in state " << bad.from
         << ")\n  " << bad.mismatch << "\n";
      if (e.repair) {
        ++repaired;
        os << "  repair with " << plural(e.repair->cost, "edit");
        if (!e.repair->annotation_ok) os << " (diagram already had conflicts; replay only)";
        os << ":\n";
        const SequenceDiagram* original = find_checked(bundle, e.sd_name);
        if (original) {
          std::istringstream diff(render_repair_diff(*original, *e.repair));
          for (std::string line; std::getline(diff, line);) os << "  " << line << "\n";
        }
        if (!e.repair->affected_objects.empty()) {
          os << "  note: the edits also involve";
          for (const auto& o : e.repair->affected_objects) os << " " << o;
          os << "; their charts were not rechecked\n";
        }
      } else {
        os << "  no repair within " << plural(static_cast<std::size_t>(bundle.max_edits), "edit");
        if (e.repair_frontier) os << "; deepest run consumed " << plural(e.repair_frontier->consumed, "message");
        os << "\n";
      }
    }
    os << "Checked " << plural(bundle.checks.size(), "pair") << ": " << accepted << " accepted, "
       << bundle.checks.size() - accepted << " rejected, " << repaired << " repaired.\n";
  }

  for (const auto& w : bundle.warnings) os << "warning: " << w << "\n";
  return os.str();
}

namespace {

json message_json(const Message& m) {
  return {{"id", m.id}, {"label", m.label}, {"args", m.args}, {"sender", m.sender}, {"receiver", m.receiver}};
}

json vector_id_json(const VectorId& id) {
  return {{"object", id.object},
          {"msg", id.message},
          {"endpoint", std::string(to_string(id.endpoint))},
          {"phase", std::string(to_string(id.phase))}};
}

json conflict_json(const Conflict& c, const AnnotatedSD* asd, const DomainTheory* dt) {
  auto vec = [&](const VectorId& id) -> json {
    if (asd && dt) return vector_text(*asd, *dt, id);
    return nullptr;
  };
  json derivation = json::array();
  for (const auto& d : derivation_lines(c)) {
    json step = vector_id_json(d.vector);
    step["via"] = std::string(to_string(d.via));
    step["vector"] = vec(d.vector);
    step["partner"] = d.partner ? vector_id_json(*d.partner) : json(nullptr);
    if (asd) step["label"] = asd->sd().message(d.vector.message).text();
    derivation.push_back(std::move(step));
  }
  return {{"sd", c.sd_name},
          {"object", c.object},
          {"afterMsg", {{"id", c.after_message.id}, {"label", c.after_message.text()}, {"vector", vec(c.after_vector)}}},
          {"beforeMsg",
           {{"id", c.before_message.id}, {"label", c.before_message.text()}, {"vector", vec(c.before_vector)}}},
          {"variable", c.variable.name},
          {"valueAfter", cell_text(c.variable, c.value_after)},
          {"valueBefore", cell_text(c.variable, c.value_before)},
          {"derivation", std::move(derivation)}};
}

json annotation_json(const AnnotatedSD& asd, const DomainTheory* dt, std::size_t conflicts) {
  json lifelines = json::array();
  for (const auto& l : asd.lifelines()) {
    json vectors = json::array();
    for (const auto& s : l.slots) {
      for (const auto& [phase, v] : {std::pair{Phase::Pre, &s.pre}, std::pair{Phase::Post, &s.post}}) {
        json entry = vector_id_json({l.object, s.message, s.endpoint, phase});
        entry.erase("object");
        entry["vector"] = dt ? json(render_cells(*dt, v->cells())) : json(nullptr);
        vectors.push_back(std::move(entry));
      }
    }
    lifelines.push_back({{"object", l.object}, {"vectors", std::move(vectors)}});
  }
  return {{"sd", asd.sd().name},
          {"messages", asd.sd().messages.size()},
          {"unifications", asd.unifications().size()},
          {"unknownCells", unknown_cells(asd)},
          {"conflicts", conflicts},
          {"lifelines", std::move(lifelines)}};
}

json edit_json(const RepairEdit& e) {
  json j = {{"kind", e.kind == RepairEdit::Kind::Delete ? "delete" : "insert"}, {"position", e.position}};
  j["message"] = e.kind == RepairEdit::Kind::Insert ? message_json(e.message) : json(nullptr);
  return j;
}

json trace_json(const ReplayTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    json sent = json::array();
    for (const auto& m : s.sent) sent.push_back(m.text());
    steps.push_back({{"event", s.received ? json(s.received->text()) : json(nullptr)},
                     {"sent", std::move(sent)},
                     {"from", s.from},
                     {"to", s.matched ? json(s.to) : json(nullptr)},
                     {"mismatch", s.matched ? json(nullptr) : json(s.mismatch)}});
  }
  return {{"accepted", t.accepted},
          {"rejectedAt", t.accepted ? json(nullptr) : json(t.rejected_at)},
          {"consumed", t.consumed},
          {"steps", std::move(steps)}};
}

json check_json(const CheckEntry& e) {
  json repair = nullptr;
  if (e.repair) {
    json edits = json::array();
    for (const auto& ed : e.repair->edits) edits.push_back(edit_json(ed));
    repair = {{"cost", e.repair->cost},
              {"annotationOk", e.repair->annotation_ok},
              {"edits", std::move(edits)},
              {"affectedObjects", e.repair->affected_objects},
              {"repaired", print_sd(e.repair->repaired)}};
  }
  return {{"sd", e.sd_name},
          {"object", e.object},
          {"trace", trace_json(e.trace)},
          {"repair", std::move(repair)},
          {"frontier", e.repair_frontier ? trace_json(*e.repair_frontier) : json(nullptr)}};
}

}  // namespace

std::string render_json(const ReportBundle& bundle) {
  json conflicts = json::array();
  for (const auto& c : bundle.conflicts) {
    conflicts.push_back(conflict_json(c, find_annotation(bundle, c.sd_name), bundle.theory));
  }
  json annotations = json::array();
  std::size_t messages = 0;
  for (const auto& a : bundle.annotations) {
    const auto n = static_cast<std::size_t>(std::count_if(bundle.conflicts.begin(), bundle.conflicts.end(),
                                                          [&](const Conflict& c) { return c.sd_name == a.sd().name; }));
    annotations.push_back(annotation_json(a, bundle.theory, n));
    messages += a.sd().messages.size();
  }
  json checks = json::array();
  std::size_t rejected = 0;
  for (const auto& e : bundle.checks) {
    checks.push_back(check_json(e));
    if (!e.trace.accepted) ++rejected;
  }
  json doc = {{"schemaVersion", kReportSchemaVersion},
              {"conflicts", std::move(conflicts)},
              {"annotations", std::move(annotations)},
              {"checks", std::move(checks)},
              {"warnings", bundle.warnings},
              {"summary",
               {{"sequenceDiagrams", bundle.annotations.size()},
                {"messages", messages},
                {"conflicts", bundle.conflicts.size()},
                {"checked", bundle.checks.size()},
                {"rejected", rejected}}}};
  return doc.dump(2) + "\n";
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

struct DotWriter {
  std::ostringstream os;
  int clusters = 0;

  static std::string id(const std::string& path) { return "\"" + dot_escape(path) + "\""; }

  static std::string join(const std::string& scope, const std::string& name) {
    return scope.empty() ? name : scope + "/" + name;
  }

  // Path of the leaf a transition into `name` (inside `scope`) lands on.
  static std::string entry_leaf(const std::vector<State>& states, const std::string& scope, const std::string& name) {
    for (const auto& s : states) {
      if (s.name != name) continue;
      if (!s.composite()) return join(scope, s.name);
      return entry_leaf(s.children, join(scope, s.name), s.initial);
    }
    return join(scope, name);
  }

  static const State* find(const std::vector<State>& states, const std::string& name) {
    for (const auto& s : states) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  void nodes(const std::vector<State>& states, const std::string& scope, const std::string& initial, int depth) {
    const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string init = id(join(scope, "__initial"));
    os << indent << init << " [shape=point, label=\"\"];\n";
    os << indent << init << " -> " << id(entry_leaf(states, scope, initial));
    if (const State* s = find(states, initial); s && s->composite()) {
      os << " [lhead=" << id("cluster_" + join(scope, s->name)) << "]";
    }
    os << ";\n";
    for (const auto& s : states) {
      const std::string path = join(scope, s.name);
      if (s.composite()) {
        os << indent << "subgraph " << id("cluster_" + path) << " {\n";
        os << indent << "  label=" << id(s.name) << ";\n";
        nodes(s.children, path, s.initial, depth + 1);
        os << indent << "}\n";
      } else {
        os << indent << id(path) << " [label=\"" << dot_escape(s.name) << (s.comment.empty() ? "" : "\\n")
           << dot_escape(s.comment) << "\"];\n";
      }
    }
  }

  // Leaf that stands in for a composite at either end of an edge.
  static std::string anchor_leaf(const State& s, const std::string& path) {
    if (!s.composite()) return path;
    return anchor_leaf(*find(s.children, s.initial), join(path, s.initial));
  }

  // Transition endpoints may name descendants of the declaring scope.
  static std::pair<const State*, std::string> locate(const std::vector<State>& states, const std::string& scope,
                                                     const std::string& name) {
    if (const State* s = find(states, name)) return {s, join(scope, name)};
    for (const auto& s : states) {
      if (!s.composite()) continue;
      auto hit = locate(s.children, join(scope, s.name), name);
      if (hit.first) return hit;
    }
    return {nullptr, join(scope, name)};
  }

  void edges(const std::vector<State>& states, const std::vector<Transition>& ts, const std::string& scope) {
    for (const auto& t : ts) {
      const auto [from, from_path] = locate(states, scope, t.from);
      const auto [to, to_path] = locate(states, scope, t.to);
      const std::string target = to && to->composite() ? anchor_leaf(*to, to_path) : to_path;
      os << "  " << id(from ? anchor_leaf(*from, from_path) : from_path) << " -> " << id(target) << " [label=\""
         << dot_escape(print_transition_label(t)) << "\"";
      if (from && from->composite()) os << ", ltail=" << id("cluster_" + from_path);
      if (to && to->composite()) os << ", lhead=" << id("cluster_" + to_path);
      os << "];\n";
    }
    for (const auto& s : states) {
      if (s.composite()) edges(s.children, s.transitions, join(scope, s.name));
    }
  }
};

}  // namespace

std::string export_dot(const Statechart& chart) {
  DotWriter w;
  w.os << "digraph " << DotWriter::id(chart.object.empty() ? std::string("statechart") : chart.object) << " {\n";
  w.os << "  compound=true;\n  rankdir=LR;\n  node [shape=box, style=rounded];\n";
  w.nodes(chart.states, "", chart.initial, 1);
  w.edges(chart.states, chart.transitions, "");
  w.os << "}\n";
  return w.os.str();
}

}  // namespace sdebug
