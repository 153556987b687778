#pragma once

// State vector annotation of sequence diagrams: initial vectors from the
// domain theory, frame-axiom propagation, unification of vectors that
// denote the same state, and conflict detection with derivations.
//
// Every object has its own lifeline: the ordered endpoints (send or
// receive) of the messages it takes part in, each with a pre and a post
// vector. A message's pre/post specification constrains the receiving
// endpoint; sending endpoints start out undetermined.

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sdebug/model.hpp"

namespace sdebug {

class AnnotationError : public std::runtime_error {
 public:
  enum class Kind { UnknownVariable, OutOfDomainLiteral, ArityMismatch, NonTermination, BadDiagram };
  AnnotationError(Kind kind, int message, const std::string& what);

  Kind kind() const { return kind_; }
  int message_id() const { return message_; }

 private:
  Kind kind_;
  int message_;
};

struct Slot {
  int message = 0;
  Endpoint endpoint = Endpoint::Send;
  StateVector pre;
  StateVector post;
};

struct Lifeline {
  std::string object;
  std::vector<Slot> slots;
};

using VectorPair = std::pair<VectorId, VectorId>;

/// One applied unifier: both vectors were joined; `grounded_*` list the
/// cells each side received from the other.
struct Unification {
  VectorId first;
  VectorId second;
  std::vector<std::size_t> grounded_first;
  std::vector<std::size_t> grounded_second;
};

class AnnotatedSD {
 public:
  AnnotatedSD() = default;
  AnnotatedSD(SequenceDiagram sd, std::size_t width, std::vector<Lifeline> lifelines);

  const SequenceDiagram& sd() const { return sd_; }
  std::size_t width() const { return width_; }
  const std::vector<Lifeline>& lifelines() const { return lifelines_; }
  std::vector<Lifeline>& lifelines() { return lifelines_; }
  const Lifeline* lifeline(std::string_view object) const;

  const StateVector& vector(const VectorId& id) const;
  StateVector& vector(const VectorId& id);
  bool contains(const VectorId& id) const;

  /// Ids along one lifeline in scan order (message, endpoint, pre before post).
  std::vector<VectorId> vector_ids(const Lifeline& l) const;

  const std::vector<Unification>& unifications() const { return unifications_; }
  std::vector<Unification>& unifications() { return unifications_; }

 private:
  SequenceDiagram sd_;
  std::size_t width_ = 0;
  std::vector<Lifeline> lifelines_;
  std::vector<Unification> unifications_;
};

/// Decides whether a candidate pair may be unified. `discarded` pairs are
/// exact (order-insensitive); `no_loops` forbid identifying two states of
/// different messages that both lie in the span.
struct AnnotationConfig {
  std::set<VectorPair> discarded;
  std::vector<NoLoop> no_loops;
  int max_unify_passes = 1000;

  bool allows(const VectorId& a, const VectorId& b) const;
};

struct DerivationStep {
  enum class Via { Initial, Spec, Frame, Unified };
  VectorId vector;
  Via via = Via::Initial;
  std::optional<VectorId> partner;  // Frame source or unification partner
};

std::string_view to_string(DerivationStep::Via v);

struct Conflict {
  std::string sd_name;
  std::string object;
  Message after_message;
  Message before_message;
  VectorId after_vector;
  VectorId before_vector;
  StateVariable variable;
  CellValue value_after;
  CellValue value_before;
  /// Provenance of the after cell walked backwards from the conflict,
  /// followed by that of the before cell.
  std::vector<DerivationStep> derivation;
};

AnnotatedSD initialize_vectors(const SequenceDiagram& sd, const DomainTheory& dt);

/// Applies the first admissible unification in scan order (lifelines in
/// declaration order; for each vector the latest partner on the same
/// lifeline first). Returns it, or nothing at a unification fixpoint.
std::optional<Unification> unify_step(AnnotatedSD& asd, const AnnotationConfig& cfg);

/// One sweep over all candidate pairs, applying every admissible unifier
/// against current values.
std::vector<Unification> unify_pass(AnnotatedSD& asd, const AnnotationConfig& cfg);

/// Frame axiom along each lifeline to fixpoint. Returns the number of
/// grounded cells.
std::size_t frame_propagate(AnnotatedSD& asd);

std::vector<Conflict> detect_conflicts(const AnnotatedSD& asd, const DomainTheory& dt);

struct AnnotationResult {
  AnnotatedSD annotated;
  std::vector<Conflict> conflicts;
};

/// initialize -> frame fixpoint -> (unify_step, frame fixpoint)* -> detect.
/// `no-loop` directives of the diagram are merged into `cfg`.
AnnotationResult annotate(const SequenceDiagram& sd, const DomainTheory& dt, AnnotationConfig cfg = {});

/// Continues unification and propagation from an existing annotation.
void saturate(AnnotatedSD& asd, const AnnotationConfig& cfg);

/// Ground values of the spec instantiated for `m`, or nullopt when the
/// message has no spec. Throws AnnotationError on arity or domain errors.
struct InstantiatedSpec {
  Cells pre;
  Cells post;
};
std::optional<InstantiatedSpec> instantiate_spec(const Message& m, const DomainTheory& dt);

/// Enumerates ground argument tuples for a context (declaration order).
std::vector<std::vector<std::string>> ground_arguments(const MessageSpec& spec);

}  // namespace sdebug
