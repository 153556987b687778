#include "sdebug/annotator.hpp"

#include <algorithm>

namespace sdebug {

AnnotationError::AnnotationError(Kind kind, int message, const std::string& what)
    : std::runtime_error(message > 0 ? "message " + std::to_string(message) + ": " + what : what),
      kind_(kind),
      message_(message) {}

std::string_view to_string(DerivationStep::Via v) {
  switch (v) {
    case DerivationStep::Via::Initial:
      return "initial";
    case DerivationStep::Via::Spec:
      return "spec";
    case DerivationStep::Via::Frame:
      return "frame";
    case DerivationStep::Via::Unified:
      return "unified";
  }
  return "";
}

AnnotatedSD::AnnotatedSD(SequenceDiagram sd, std::size_t width, std::vector<Lifeline> lifelines)
    : sd_(std::move(sd)), width_(width), lifelines_(std::move(lifelines)) {
  for (const auto& l : lifelines_) {
    for (const auto& s : l.slots) {
      if (s.pre.size() != width_ || s.post.size() != width_)
        throw ModelError("state vector width differs from the number of state variables");
    }
  }
}

const Lifeline* AnnotatedSD::lifeline(std::string_view object) const {
  for (const auto& l : lifelines_) {
    if (l.object == object) return &l;
  }
  return nullptr;
}

namespace {

Slot* find_slot(std::vector<Lifeline>& lifelines, const VectorId& id) {
  for (auto& l : lifelines) {
    if (l.object != id.object) continue;
    for (auto& s : l.slots) {
      if (s.message == id.message && s.endpoint == id.endpoint) return &s;
    }
  }
  return nullptr;
}

VectorId id_at(const Lifeline& l, std::size_t idx) {
  const Slot& s = l.slots[idx / 2];
  return {l.object, s.message, s.endpoint, idx % 2 == 0 ? Phase::Pre : Phase::Post};
}

StateVector& vec_at(Lifeline& l, std::size_t idx) {
  Slot& s = l.slots[idx / 2];
  return idx % 2 == 0 ? s.pre : s.post;
}

}  // namespace

bool AnnotatedSD::contains(const VectorId& id) const {
  return find_slot(const_cast<std::vector<Lifeline>&>(lifelines_), id) != nullptr;
}

const StateVector& AnnotatedSD::vector(const VectorId& id) const {
  return const_cast<AnnotatedSD*>(this)->vector(id);
}

StateVector& AnnotatedSD::vector(const VectorId& id) {
  Slot* s = find_slot(lifelines_, id);
  if (!s) throw ModelError("no state vector " + to_string(id));
  return id.phase == Phase::Pre ? s->pre : s->post;
}

std::vector<VectorId> AnnotatedSD::vector_ids(const Lifeline& l) const {
  std::vector<VectorId> out;
  for (std::size_t i = 0; i < l.slots.size() * 2; ++i) out.push_back(id_at(l, i));
  return out;
}

bool AnnotationConfig::allows(const VectorId& a, const VectorId& b) const {
  if (discarded.count({a, b}) || discarded.count({b, a})) return false;
  if (a.message != b.message) {
    for (const auto& nl : no_loops) {
      auto inside = [&](int m) { return m >= nl.first && m <= nl.last; };
      if (inside(a.message) && inside(b.message)) return false;
    }
  }
  return true;
}

std::vector<std::vector<std::string>> ground_arguments(const MessageSpec& spec) {
  std::vector<std::vector<std::string>> out{{}};
  for (const auto& p : spec.params) {
    std::vector<std::vector<std::string>> next;
    for (const auto& prefix : out) {
      for (int code : p.domain.codes()) {
        auto row = prefix;
        row.push_back(p.domain.literal(code));
        next.push_back(std::move(row));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::optional<InstantiatedSpec> instantiate_spec(const Message& m, const DomainTheory& dt) {
  const MessageSpec* spec = dt.find_spec(m.label);
  if (!spec) return std::nullopt;
  if (spec->params.size() != m.args.size()) {
    throw AnnotationError(AnnotationError::Kind::ArityMismatch, m.id,
                          "'" + m.label + "' expects " + std::to_string(spec->params.size()) + " argument(s), got " +
                              std::to_string(m.args.size()));
  }
  for (std::size_t i = 0; i < spec->params.size(); ++i) {
    if (!spec->params[i].domain.parse_literal(m.args[i])) {
      throw AnnotationError(AnnotationError::Kind::OutOfDomainLiteral, m.id,
                            "argument '" + m.args[i] + "' outside " + spec->params[i].domain.describe());
    }
  }
  auto fill = [&](const Condition& c) {
    Cells cells(dt.width());
    for (const auto& atom : c.atoms) {
      const StateVariable* v = dt.find_variable(atom.variable);
      if (!v) {
        throw AnnotationError(AnnotationError::Kind::UnknownVariable, m.id,
                              "unknown state variable '" + atom.variable + "'");
      }
      std::string text = atom.value;
      for (std::size_t i = 0; i < spec->params.size(); ++i) {
        if (spec->params[i].name == atom.value) text = m.args[i];
      }
      auto code = v->domain.parse_literal(text);
      if (!code) {
        throw AnnotationError(AnnotationError::Kind::OutOfDomainLiteral, m.id,
                              "value '" + text + "' outside domain of " + v->name);
      }
      cells[v->index] = CellValue::known(*code);
    }
    return cells;
  };
  return InstantiatedSpec{fill(spec->pre), fill(spec->post)};
}

AnnotatedSD initialize_vectors(const SequenceDiagram& sd, const DomainTheory& dt) {
  try {
    sd.validate();
  } catch (const ModelError& e) {
    throw AnnotationError(AnnotationError::Kind::BadDiagram, 0, e.what());
  }
  const std::size_t width = dt.width();
  std::vector<std::optional<InstantiatedSpec>> specs;
  for (const auto& m : sd.messages) specs.push_back(instantiate_spec(m, dt));

  auto from_cells = [&](const Cells& cells, int message, Phase phase) {
    std::vector<Provenance> prov(width);
    for (std::size_t j = 0; j < width; ++j) {
      if (cells[j].is_known()) prov[j] = provenance::FromSpec{message, phase};
    }
    return StateVector(cells, std::move(prov));
  };

  std::vector<Lifeline> lifelines;
  for (const auto& obj : sd.objects) {
    Lifeline l{obj, {}};
    for (std::size_t i = 0; i < sd.messages.size(); ++i) {
      const Message& m = sd.messages[i];
      if (m.sender == obj) l.slots.push_back({m.id, Endpoint::Send, StateVector(width), StateVector(width)});
      if (m.receiver == obj) {
        if (specs[i]) {
          l.slots.push_back({m.id, Endpoint::Receive, from_cells(specs[i]->pre, m.id, Phase::Pre),
                             from_cells(specs[i]->post, m.id, Phase::Post)});
        } else {
          l.slots.push_back({m.id, Endpoint::Receive, StateVector(width), StateVector(width)});
        }
      }
    }
    lifelines.push_back(std::move(l));
  }
  return AnnotatedSD(sd, width, std::move(lifelines));
}

std::size_t frame_propagate(AnnotatedSD& asd) {
  std::size_t grounded = 0;
  const std::size_t width = asd.width();
  for (auto& l : asd.lifelines()) {
    for (std::size_t i = 0; i < l.slots.size(); ++i) {
      Slot& s = l.slots[i];
      if (i > 0) {
        const Slot& prev = l.slots[i - 1];
        const VectorId src{l.object, prev.message, prev.endpoint, Phase::Post};
        for (std::size_t j = 0; j < width; ++j) {
          if (!s.pre[j].is_known() && prev.post[j].is_known()) {
            s.pre.ground(j, prev.post[j].value(), provenance::Frame{src, j});
            ++grounded;
          }
        }
      }
      const VectorId src{l.object, s.message, s.endpoint, Phase::Pre};
      for (std::size_t j = 0; j < width; ++j) {
        if (!s.post[j].is_known() && s.pre[j].is_known()) {
          s.post.ground(j, s.pre[j].value(), provenance::Frame{src, j});
          ++grounded;
        }
      }
    }
  }
  return grounded;
}

namespace {

std::optional<Unification> try_unify(Lifeline& l, std::size_t k, std::size_t m, const AnnotationConfig& cfg) {
  StateVector& a = vec_at(l, k);
  StateVector& b = vec_at(l, m);
  if (a.cells() == b.cells()) return std::nullopt;
  const VectorId ida = id_at(l, k);
  const VectorId idb = id_at(l, m);
  if (!cfg.allows(ida, idb)) return std::nullopt;
  if (!unify(a.cells(), b.cells())) return std::nullopt;
  Unification u{ida, idb, {}, {}};
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!a[j].is_known() && b[j].is_known()) {
      a.ground(j, b[j].value(), provenance::Unified{idb});
      u.grounded_first.push_back(j);
    } else if (a[j].is_known() && !b[j].is_known()) {
      b.ground(j, a[j].value(), provenance::Unified{ida});
      u.grounded_second.push_back(j);
    }
  }
  return u;
}

}  // namespace

std::optional<Unification> unify_step(AnnotatedSD& asd, const AnnotationConfig& cfg) {
  for (auto& l : asd.lifelines()) {
    const std::size_t n = l.slots.size() * 2;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t m = n; m-- > k + 1;) {
        if (auto u = try_unify(l, k, m, cfg)) {
          asd.unifications().push_back(*u);
          return u;
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<Unification> unify_pass(AnnotatedSD& asd, const AnnotationConfig& cfg) {
  std::vector<Unification> applied;
  for (auto& l : asd.lifelines()) {
    const std::size_t n = l.slots.size() * 2;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t m = n; m-- > k + 1;) {
        if (auto u = try_unify(l, k, m, cfg)) {
          asd.unifications().push_back(*u);
          applied.push_back(std::move(*u));
        }
      }
    }
  }
  return applied;
}

void saturate(AnnotatedSD& asd, const AnnotationConfig& cfg) {
  if (cfg.max_unify_passes < 1) throw ModelError("max-unify-passes must be positive");
  frame_propagate(asd);
  int passes = 0;
  while (unify_step(asd, cfg)) {
    if (++passes > cfg.max_unify_passes) {
      throw AnnotationError(AnnotationError::Kind::NonTermination, 0,
                            "unification did not reach a fixpoint within " + std::to_string(cfg.max_unify_passes) +
                                " steps");
    }
    frame_propagate(asd);
  }
}

namespace {

void walk(const AnnotatedSD& asd, VectorId id, std::size_t cell, std::vector<DerivationStep>& out) {
  std::set<VectorId> seen;
  while (seen.insert(id).second) {
    const Provenance& p = asd.vector(id).provenance(cell);
    DerivationStep step{id, DerivationStep::Via::Initial, std::nullopt};
    std::optional<VectorId> next;
    if (std::holds_alternative<provenance::FromSpec>(p)) {
      step.via = DerivationStep::Via::Spec;
    } else if (const auto* f = std::get_if<provenance::Frame>(&p)) {
      step.via = DerivationStep::Via::Frame;
      step.partner = f->source;
      next = f->source;
    } else if (const auto* u = std::get_if<provenance::Unified>(&p)) {
      step.via = DerivationStep::Via::Unified;
      step.partner = u->with;
      next = u->with;
    }
    out.push_back(std::move(step));
    if (!next) return;
    id = *next;
  }
}

}  // namespace

std::vector<Conflict> detect_conflicts(const AnnotatedSD& asd, const DomainTheory& dt) {
  std::vector<Conflict> out;
  for (const auto& l : asd.lifelines()) {
    for (std::size_t i = 0; i + 1 < l.slots.size(); ++i) {
      const Slot& a = l.slots[i];
      const Slot& b = l.slots[i + 1];
      for (std::size_t j = 0; j < asd.width(); ++j) {
        if (!a.post[j].is_known() || !b.pre[j].is_known() || a.post[j] == b.pre[j]) continue;
        Conflict c;
        c.sd_name = asd.sd().name;
        c.object = l.object;
        c.after_message = asd.sd().message(a.message);
        c.before_message = asd.sd().message(b.message);
        c.after_vector = {l.object, a.message, a.endpoint, Phase::Post};
        c.before_vector = {l.object, b.message, b.endpoint, Phase::Pre};
        c.variable = dt.variables().at(j);
        c.value_after = a.post[j];
        c.value_before = b.pre[j];
        walk(asd, c.after_vector, j, c.derivation);
        walk(asd, c.before_vector, j, c.derivation);
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

AnnotationResult annotate(const SequenceDiagram& sd, const DomainTheory& dt, AnnotationConfig cfg) {
  for (const auto& nl : sd.no_loops) cfg.no_loops.push_back(nl);
  AnnotationResult r{initialize_vectors(sd, dt), {}};
  saturate(r.annotated, cfg);
  r.conflicts = detect_conflicts(r.annotated, dt);
  return r;
}

}  // namespace sdebug
