#include "sdebug/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <set>

namespace sdebug {

VarDomain VarDomain::boolean() { return VarDomain{}; }

VarDomain VarDomain::range(int lo, int hi) {
  if (lo > hi) throw ModelError("empty integer range " + std::to_string(lo) + ".." + std::to_string(hi));
  VarDomain d;
  d.kind_ = Kind::IntRange;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

VarDomain VarDomain::enumeration(std::vector<std::string> labels) {
  if (labels.empty()) throw ModelError("enumeration without labels");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw ModelError("duplicate enumeration label '" + l + "'");
  }
  VarDomain d;
  d.kind_ = Kind::Enumeration;
  d.lo_ = 0;
  d.hi_ = static_cast<int>(labels.size()) - 1;
  d.labels_ = std::move(labels);
  return d;
}

std::vector<int> VarDomain::codes() const {
  std::vector<int> out;
  for (int c = lo_; c <= hi_; ++c) out.push_back(c);
  return out;
}

bool VarDomain::contains(int code) const { return code >= lo_ && code <= hi_; }

std::optional<int> VarDomain::parse_literal(std::string_view text) const {
  switch (kind_) {
    case Kind::Boolean:
      if (text == "T") return 1;
      if (text == "F") return 0;
      return std::nullopt;
    case Kind::IntRange: {
      int v = 0;
      const char* end = text.data() + text.size();
      auto [p, ec] = std::from_chars(text.data(), end, v);
      if (ec != std::errc{} || p != end || !contains(v)) return std::nullopt;
      return v;
    }
    case Kind::Enumeration: {
      auto it = std::find(labels_.begin(), labels_.end(), text);
      if (it == labels_.end()) return std::nullopt;
      return static_cast<int>(it - labels_.begin());
    }
  }
  return std::nullopt;
}

std::string VarDomain::literal(int code) const {
  switch (kind_) {
    case Kind::Boolean:
      return code ? "T" : "F";
    case Kind::IntRange:
      return std::to_string(code);
    case Kind::Enumeration:
      return labels_.at(static_cast<std::size_t>(code));
  }
  return {};
}

std::string VarDomain::describe() const {
  switch (kind_) {
    case Kind::Boolean:
      return "Boolean";
    case Kind::IntRange:
      return std::to_string(lo_) + ".." + std::to_string(hi_);
    case Kind::Enumeration: {
      std::string s = "enum {";
      for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (i) s += ',';
        s += labels_[i];
      }
      return s + "}";
    }
  }
  return {};
}

bool compatible(CellValue a, CellValue b) {
  return !a.is_known() || !b.is_known() || a.value() == b.value();
}

std::optional<Cells> unify(std::span<const CellValue> a, std::span<const CellValue> b) {
  if (a.size() != b.size()) throw ModelError("unify: state vectors differ in length");
  Cells out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!compatible(a[i], b[i])) return std::nullopt;
    out[i] = a[i].is_known() ? a[i] : b[i];
  }
  return out;
}

std::string_view to_string(Endpoint e) { return e == Endpoint::Send ? "send" : "receive"; }
std::string_view to_string(Phase p) { return p == Phase::Pre ? "pre" : "post"; }

std::string to_string(const VectorId& id) {
  return id.object + "/" + std::to_string(id.message) + "/" + std::string(to_string(id.endpoint)) + "/" +
         std::string(to_string(id.phase));
}

StateVector::StateVector(std::size_t width) : cells_(width), provenance_(width) {}

StateVector::StateVector(Cells cells, std::vector<Provenance> provenance)
    : cells_(std::move(cells)), provenance_(std::move(provenance)) {
  if (cells_.size() != provenance_.size()) throw ModelError("state vector provenance length mismatch");
}

void StateVector::ground(std::size_t i, int code, Provenance why) {
  if (cells_.at(i).is_known()) throw ModelError("attempt to rewrite a known state vector cell");
  cells_[i] = CellValue::known(code);
  provenance_[i] = std::move(why);
}

DomainTheory::DomainTheory(std::vector<StateVariable> variables, std::vector<MessageSpec> specs)
    : variables_(std::move(variables)), specs_(std::move(specs)) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].index != i) throw ModelError("variable index out of declaration order");
    if (!names.insert(variables_[i].name).second)
      throw ModelError("duplicate state variable '" + variables_[i].name + "'");
  }
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (equal_ignore_case(specs_[i].name, specs_[j].name))
        throw ModelError("duplicate context '" + specs_[i].name + "'");
    }
  }
}

const StateVariable* DomainTheory::find_variable(std::string_view name) const {
  for (const auto& v : variables_) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

const MessageSpec* DomainTheory::find_spec(std::string_view label) const {
  for (const auto& s : specs_) {
    if (equal_ignore_case(s.name, label)) return &s;
  }
  return nullptr;
}

bool equal_ignore_case(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::string render_cells(const DomainTheory& dt, std::span<const CellValue> cells) {
  std::string s = "<";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i].is_known() ? dt.variables().at(i).domain.literal(cells[i].value()) : "?";
  }
  return s + ">";
}

std::string Message::text() const {
  if (args.empty()) return label;
  std::string s = label + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ", ";
    s += args[i];
  }
  return s + ")";
}

bool SequenceDiagram::has_object(std::string_view name) const {
  return std::find(objects.begin(), objects.end(), name) != objects.end();
}

void SequenceDiagram::validate() const {
  std::set<std::string> seen;
  for (const auto& o : objects) {
    if (!seen.insert(o).second) throw ModelError("duplicate object '" + o + "' in " + name);
  }
  for (std::size_t i = 0; i < messages.size(); ++i) {
    const auto& m = messages[i];
    if (m.id != static_cast<int>(i) + 1) throw ModelError("message ids must be contiguous from 1");
    if (!has_object(m.sender)) throw ModelError("undeclared sender '" + m.sender + "'");
    if (!has_object(m.receiver)) throw ModelError("undeclared receiver '" + m.receiver + "'");
  }
  const int n = static_cast<int>(messages.size());
  for (const auto& nl : no_loops) {
    if (nl.first < 1 || nl.last > n || nl.first > nl.last)
      throw ModelError("no-loop span " + std::to_string(nl.first) + ":" + std::to_string(nl.last) +
                       " outside 1.." + std::to_string(n));
  }
}

namespace {

void collect_named(const std::vector<State>& states, std::string_view name, std::vector<const State*>& out) {
  for (const auto& s : states) {
    if (s.name == name) out.push_back(&s);
    collect_named(s.children, name, out);
  }
}

// Direct children win; otherwise the name must be unique among descendants.
const State* resolve(const std::vector<State>& scope, std::string_view name) {
  for (const auto& s : scope) {
    if (s.name == name) return &s;
  }
  std::vector<const State*> hits;
  for (const auto& s : scope) collect_named(s.children, name, hits);
  if (hits.empty()) throw ModelError("dangling transition endpoint '" + std::string(name) + "'");
  if (hits.size() > 1) throw ModelError("ambiguous transition endpoint '" + std::string(name) + "'");
  return hits.front();
}

void validate_scope(const std::vector<State>& states, const std::string& initial,
                    const std::vector<Transition>& transitions, const std::string& where) {
  if (states.empty()) throw ModelError("empty scope " + where);
  std::set<std::string> names;
  for (const auto& s : states) {
    if (!names.insert(s.name).second) throw ModelError("duplicate state '" + s.name + "' in " + where);
  }
  if (initial.empty()) throw ModelError("missing initial state in " + where);
  if (!names.count(initial)) throw ModelError("initial state '" + initial + "' not declared in " + where);
  for (const auto& t : transitions) {
    resolve(states, t.from);
    resolve(states, t.to);
  }
  for (const auto& s : states) {
    if (s.composite()) validate_scope(s.children, s.initial, s.transitions, "state " + s.name);
  }
}

void collect_leaves(const State& s, std::vector<const State*>& out) {
  if (!s.composite()) {
    out.push_back(&s);
    return;
  }
  for (const auto& c : s.children) collect_leaves(c, out);
}

const State* entry_leaf(const State& s) {
  const State* cur = &s;
  while (cur->composite()) {
    const State* next = nullptr;
    for (const auto& c : cur->children) {
      if (c.name == cur->initial) next = &c;
    }
    if (!next) throw ModelError("composite state '" + cur->name + "' has no valid initial");
    cur = next;
  }
  return cur;
}

}  // namespace

void Statechart::validate() const { validate_scope(states, initial, transitions, "chart " + object); }

FlatMachine flatten(const Statechart& chart) {
  chart.validate();
  std::vector<const State*> leaves;
  for (const auto& s : chart.states) collect_leaves(s, leaves);

  std::map<std::string, int> short_count;
  for (const State* l : leaves) ++short_count[l->name];

  FlatMachine fm;
  std::map<const State*, std::size_t> index;
  std::vector<std::string> paths;
  // Qualified names only where short names collide.
  std::function<void(const State&, const std::string&)> walk = [&](const State& s, const std::string& prefix) {
    const std::string path = prefix.empty() ? s.name : prefix + "." + s.name;
    if (!s.composite()) {
      index[&s] = fm.states.size();
      fm.states.push_back(short_count[s.name] > 1 ? path : s.name);
      return;
    }
    for (const auto& c : s.children) walk(c, path);
  };
  for (const auto& s : chart.states) walk(s, "");

  const State* root_initial = resolve(chart.states, chart.initial);
  fm.initial = index.at(entry_leaf(*root_initial));

  std::function<void(const std::vector<State>&, const std::vector<Transition>&)> emit =
      [&](const std::vector<State>& scope, const std::vector<Transition>& transitions) {
        for (const auto& t : transitions) {
          const State* from = resolve(scope, t.from);
          const State* to = entry_leaf(*resolve(scope, t.to));
          std::vector<const State*> sources;
          collect_leaves(*from, sources);
          for (const State* src : sources) {
            fm.edges.push_back({index.at(src), index.at(to), t.event, t.guard, t.actions});
          }
        }
        for (const auto& s : scope) {
          if (s.composite()) emit(s.children, s.transitions);
        }
      };
  emit(chart.states, chart.transitions);
  return fm;
}

}  // namespace sdebug
