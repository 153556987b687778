#pragma once

// Statechart synthesis from annotated sequence diagrams: one flat chart per
// object and diagram, merging across diagrams, and grouping of
// single-entry/single-exit regions into composite states.

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sdebug/annotator.hpp"
#include "sdebug/model.hpp"

namespace sdebug {

/// States are keyed by their state vector; transitions carry the received
/// message as event and the messages sent before the next reception as
/// actions. An empty event marks a completion transition.
struct FlatChart {
  struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    std::string event;
    std::vector<std::string> actions;
    bool operator==(const Edge&) const = default;
  };

  std::string object;
  std::vector<Cells> states;
  std::optional<std::size_t> initial;
  std::vector<Edge> edges;

  bool empty() const { return states.empty(); }
  /// Adds the edge unless an identical one exists.
  void add_edge(Edge e);
};

class SynthesisError : public std::runtime_error {
 public:
  SynthesisError(const std::string& what, std::vector<Conflict> conflicts);
  const std::vector<Conflict>& conflicts() const { return conflicts_; }

 private:
  std::vector<Conflict> conflicts_;
};

/// One step of an object's lifeline: an optional received message and the
/// messages the object sends afterwards, up to the next reception.
struct LifelineStep {
  std::optional<Message> received;
  std::vector<Message> sent;
  std::size_t first_slot = 0;
  std::size_t last_slot = 0;

  std::string event() const { return received ? received->text() : std::string(); }
  std::vector<std::string> actions() const;
};

std::vector<LifelineStep> lifeline_steps(const SequenceDiagram& sd, std::string_view object);

/// Throws SynthesisError when the object's lifeline has conflicts.
FlatChart synth_object_chart(const AnnotatedSD& asd, const DomainTheory& dt, std::string_view object);

/// Union of the charts; initial states are always identified, other states
/// are identified when their keys unify (never two states of one input).
FlatChart merge_charts(std::span<const FlatChart> charts);

/// Flat statechart with states N1, N2, ... in chart order, each annotated
/// with its state vector.
Statechart to_statechart(const FlatChart& chart, const DomainTheory& dt);

Statechart introduce_hierarchy(const FlatChart& chart, const DomainTheory& dt);

/// "state Nk has several transitions on event e" diagnostics.
std::vector<std::string> nondeterminism_warnings(const FlatChart& chart);

struct SynthesisResult {
  std::map<std::string, FlatChart> flat;
  std::map<std::string, Statechart> charts;
  std::vector<std::string> warnings;
};

SynthesisResult synthesize(const DomainTheory& dt, std::span<const SequenceDiagram> sds,
                           const AnnotationConfig& cfg = {});

}  // namespace sdebug
