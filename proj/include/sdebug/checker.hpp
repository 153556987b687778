#pragma once

// Reverse check: replays sequence diagrams as executions of a statechart
// and searches for the fewest message insertions and deletions that make
// a rejected diagram acceptable again.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sdebug/annotator.hpp"
#include "sdebug/model.hpp"

namespace sdebug {

struct ReplayOptions {
  /// Unknown cells fail guards instead of satisfying them.
  bool strict_guards = false;
};

/// One step of the object's projection: a received message (or none, for
/// the sends before the first reception) followed by the object's sends.
struct ReplayStep {
  std::optional<Message> received;
  std::vector<Message> sent;
  std::string from;
  std::string to;
  std::optional<Transition> matched;
  std::string mismatch;  // set on the rejected step only
};

struct ReplayTrace {
  std::string sd_name;
  std::string object;
  std::vector<ReplayStep> steps;
  bool accepted = true;
  /// Index into `steps` of the first step no run could consume.
  std::size_t rejected_at = 0;
  /// Projected messages consumed by the deepest run.
  std::size_t consumed = 0;
};

/// Walks the flattened chart from its initial state; each step must match
/// one transition's event, guard and exact action list. Backtracks over
/// nondeterministic choices and reports the deepest run on rejection.
ReplayTrace replay(const SequenceDiagram& sd, std::string_view object, const Statechart& chart,
                   const DomainTheory& dt, const ReplayOptions& opts = {});

struct RepairResult {
  std::vector<RepairEdit> edits;
  SequenceDiagram repaired;
  std::size_t cost = 0;
  /// False when the input already had conflicts, so only replay was required.
  bool annotation_ok = true;
  /// Other objects whose lifelines the edits touch; they were not rechecked.
  std::vector<std::string> affected_objects;
};

class NoRepairWithinBound : public std::runtime_error {
 public:
  NoRepairWithinBound(int max_edits, ReplayTrace frontier, std::vector<RepairEdit> frontier_edits);
  int max_edits() const { return max_edits_; }
  /// Deepest-progress rejected candidate seen during the search.
  const ReplayTrace& frontier() const { return frontier_; }
  const std::vector<RepairEdit>& frontier_edits() const { return frontier_edits_; }

 private:
  int max_edits_;
  ReplayTrace frontier_;
  std::vector<RepairEdit> frontier_edits_;
};

/// Messages that may be inserted, in tie-break order: domain theory
/// contexts (ground arguments enumerated) as received then as sent, then
/// remaining chart events as received and chart actions as sent.
std::vector<Message> repair_candidates(const SequenceDiagram& sd, std::string_view object, const Statechart& chart,
                                       const DomainTheory& dt);

/// Applies a canonical edit script (positions refer to the original
/// diagram) and renumbers messages; no-loop spans follow their messages.
SequenceDiagram apply_edits(const SequenceDiagram& sd, const std::vector<RepairEdit>& edits);

struct RepairOptions {
  int max_edits = 4;
  ReplayOptions replay;
  AnnotationConfig annotation;
};

/// Iterative deepening over edit scripts; throws NoRepairWithinBound.
RepairResult repair(const SequenceDiagram& sd, std::string_view object, const Statechart& chart,
                    const DomainTheory& dt, const RepairOptions& opts = {});

struct CheckEntry {
  std::string sd_name;
  std::string object;
  ReplayTrace trace;
  std::optional<RepairResult> repair;
  std::optional<ReplayTrace> repair_frontier;  // set when no repair was found
};

/// Replays every (diagram, object) pair with a chart; repairs rejected ones.
std::vector<CheckEntry> check_all(const DomainTheory& dt, const std::map<std::string, Statechart>& charts,
                                  const std::vector<SequenceDiagram>& sds, const RepairOptions& opts = {});

}  // namespace sdebug
