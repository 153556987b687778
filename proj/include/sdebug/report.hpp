#pragma once

// Human and machine renderings of annotation, conflict and check results,
// plus DOT export of statecharts.

#include <string>
#include <vector>

#include "sdebug/annotator.hpp"
#include "sdebug/checker.hpp"
#include "sdebug/model.hpp"

namespace sdebug {

inline constexpr int kReportSchemaVersion = 1;

struct ReportBundle {
  const DomainTheory* theory = nullptr;  // needed to print vectors
  std::vector<AnnotatedSD> annotations;
  std::vector<Conflict> conflicts;
  /// Diagrams as given to the checker, for rendering repair diffs.
  std::vector<SequenceDiagram> checked;
  std::vector<CheckEntry> checks;
  int max_edits = 0;
  std::vector<std::string> warnings;
};

/// "message N ("label") has no context in the domain theory" lines.
std::vector<std::string> unspecified_message_warnings(const SequenceDiagram& sd, const DomainTheory& dt);

std::string render_text(const ReportBundle& bundle);
std::string render_json(const ReportBundle& bundle);

/// Conflict block in the classic report layout; exposed for golden tests.
std::string render_conflict(const Conflict& c, const AnnotatedSD& asd, const DomainTheory& dt);

/// `--- / +++` listing of an edit script; added lines start with `+`,
/// removed ones with `-`.
std::string render_repair_diff(const SequenceDiagram& original, const RepairResult& r);

std::string export_dot(const Statechart& chart);

}  // namespace sdebug
