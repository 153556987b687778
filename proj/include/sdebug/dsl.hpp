#pragma once

// Text formats: domain theory (.dt), sequence diagram (.sd), statechart (.sc).
// `#` starts a comment that runs to end of line in all three.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sdebug/model.hpp"

namespace sdebug {

struct SourceSpan {
  std::string file;
  int line = 1;
  int column_begin = 1;
  int column_end = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, std::string message, std::optional<std::string> expected = std::nullopt);

  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }
  const std::optional<std::string>& expected() const { return expected_; }

 private:
  SourceSpan span_;
  std::string message_;
  std::optional<std::string> expected_;
};

DomainTheory parse_domain_theory(std::string_view text, std::string_view file = "<dt>");
SequenceDiagram parse_sd(std::string_view text, std::string_view file = "<sd>");
Statechart parse_sc(std::string_view text, std::string_view file = "<sc>");

std::string print_domain_theory(const DomainTheory& dt);
std::string print_sd(const SequenceDiagram& sd);
std::string print_sc(const Statechart& chart);

std::string print_condition(const Condition& c);
/// `event [guard] / a1, a2`
std::string print_transition_label(const Transition& t);
std::string print_message_line(const Message& m);

}  // namespace sdebug
