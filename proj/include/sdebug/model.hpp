#pragma once

// Core domain types: state variables, state vectors, sequence diagrams,
// statecharts. No I/O lives here.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sdebug {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Domain of a state variable. Values are stored as integer codes:
/// Boolean F=0/T=1, integer ranges use the integer itself, enumerations
/// use the label index.
class VarDomain {
 public:
  enum class Kind { Boolean, IntRange, Enumeration };

  static VarDomain boolean();
  static VarDomain range(int lo, int hi);
  static VarDomain enumeration(std::vector<std::string> labels);

  Kind kind() const { return kind_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// All codes of the domain in ascending order.
  std::vector<int> codes() const;
  bool contains(int code) const;

  /// Resolves literal text (`T`, `3`, `Espresso`) to a code. Enumeration
  /// labels compare case-sensitively.
  std::optional<int> parse_literal(std::string_view text) const;
  std::string literal(int code) const;

  /// Declaration syntax: `Boolean`, `0..1`, `enum {a,b}`.
  std::string describe() const;

  bool operator==(const VarDomain&) const = default;

 private:
  Kind kind_ = Kind::Boolean;
  int lo_ = 0;
  int hi_ = 1;
  std::vector<std::string> labels_;
};

struct StateVariable {
  std::string name;
  VarDomain domain;
  std::size_t index = 0;

  bool operator==(const StateVariable&) const = default;
};

/// A state vector cell: a known domain code or the undetermined value `?`.
class CellValue {
 public:
  CellValue() = default;
  static CellValue unknown() { return CellValue{}; }
  static CellValue known(int code) {
    CellValue c;
    c.value_ = code;
    return c;
  }

  bool is_known() const { return value_.has_value(); }
  int value() const { return *value_; }

  auto operator<=>(const CellValue&) const = default;

 private:
  std::optional<int> value_;
};

using Cells = std::vector<CellValue>;

/// True iff the two cells can denote the same value.
bool compatible(CellValue a, CellValue b);

/// Pointwise join of two cell rows; absent when some pair of known cells
/// clashes. Both rows must have the same length.
std::optional<Cells> unify(std::span<const CellValue> a, std::span<const CellValue> b);

enum class Endpoint { Send, Receive };
enum class Phase { Pre, Post };

std::string_view to_string(Endpoint e);
std::string_view to_string(Phase p);

/// Stable identity of a state vector inside an annotated SD.
struct VectorId {
  std::string object;
  int message = 0;
  Endpoint endpoint = Endpoint::Send;
  Phase phase = Phase::Pre;

  auto operator<=>(const VectorId&) const = default;
};

std::string to_string(const VectorId& id);

namespace provenance {
struct Initial {
  bool operator==(const Initial&) const = default;
};
struct FromSpec {
  int message = 0;
  Phase phase = Phase::Pre;
  bool operator==(const FromSpec&) const = default;
};
struct Frame {
  VectorId source;
  std::size_t cell = 0;
  bool operator==(const Frame&) const = default;
};
struct Unified {
  VectorId with;
  bool operator==(const Unified&) const = default;
};
}  // namespace provenance

using Provenance =
    std::variant<provenance::Initial, provenance::FromSpec, provenance::Frame, provenance::Unified>;

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::size_t width);
  StateVector(Cells cells, std::vector<Provenance> provenance);

  std::size_t size() const { return cells_.size(); }
  const Cells& cells() const { return cells_; }
  const CellValue& operator[](std::size_t i) const { return cells_.at(i); }
  const Provenance& provenance(std::size_t i) const { return provenance_.at(i); }

  /// Grounds an Unknown cell. Rewriting a known cell is a logic error.
  void ground(std::size_t i, int code, Provenance why);

  bool operator==(const StateVector&) const = default;

 private:
  Cells cells_;
  std::vector<Provenance> provenance_;
};

/// `var = value` atom; `value` is literal text or a parameter name.
struct Atom {
  std::string variable;
  std::string value;
  bool operator==(const Atom&) const = default;
};

struct Condition {
  std::vector<Atom> atoms;
  bool empty() const { return atoms.empty(); }
  bool operator==(const Condition&) const = default;
};

struct Parameter {
  std::string name;
  VarDomain domain;
  bool operator==(const Parameter&) const = default;
};

struct MessageSpec {
  std::string name;
  std::vector<Parameter> params;
  Condition pre;
  Condition post;
  bool operator==(const MessageSpec&) const = default;
};

class DomainTheory {
 public:
  DomainTheory() = default;
  DomainTheory(std::vector<StateVariable> variables, std::vector<MessageSpec> specs);

  const std::vector<StateVariable>& variables() const { return variables_; }
  const std::vector<MessageSpec>& specs() const { return specs_; }
  std::size_t width() const { return variables_.size(); }

  const StateVariable* find_variable(std::string_view name) const;
  /// Context lookup by message label, ASCII case-insensitive.
  const MessageSpec* find_spec(std::string_view label) const;

  bool operator==(const DomainTheory&) const = default;

 private:
  std::vector<StateVariable> variables_;
  std::vector<MessageSpec> specs_;
};

bool equal_ignore_case(std::string_view a, std::string_view b);

/// Renders `<v1,v2,...>` with `?` for Unknown.
std::string render_cells(const DomainTheory& dt, std::span<const CellValue> cells);

struct Message {
  int id = 0;
  std::string label;
  std::vector<std::string> args;
  std::string sender;
  std::string receiver;

  /// Label with its argument list, e.g. `Enter Selection(Espresso)`.
  std::string text() const;
  bool operator==(const Message&) const = default;
};

/// `assume no-loop i j`: no state inside messages i..j may be identified
/// with another state inside the same span.
struct NoLoop {
  int first = 0;
  int last = 0;
  auto operator<=>(const NoLoop&) const = default;
};

struct SequenceDiagram {
  std::string name;
  std::vector<std::string> objects;
  std::vector<Message> messages;
  std::vector<NoLoop> no_loops;

  bool has_object(std::string_view name) const;
  const Message& message(int id) const { return messages.at(static_cast<std::size_t>(id - 1)); }
  /// Throws ModelError on duplicate objects, undeclared endpoints or
  /// non-contiguous ids.
  void validate() const;
  bool operator==(const SequenceDiagram&) const = default;
};

struct Transition {
  std::string from;
  std::string to;
  std::string event;  // empty for completion transitions
  std::optional<Condition> guard;
  std::vector<std::string> actions;
  bool operator==(const Transition&) const = default;
};

/// A (sub)chart node. Composite iff it has children; a composite carries
/// its own initial marker and the transitions declared in its scope.
struct State {
  std::string name;
  std::string comment;
  std::vector<State> children;
  std::string initial;
  std::vector<Transition> transitions;

  bool composite() const { return !children.empty(); }
  bool operator==(const State&) const = default;
};

struct Statechart {
  std::string object;
  std::vector<State> states;
  std::string initial;
  std::vector<Transition> transitions;

  /// Throws ModelError when an initial marker is missing, a transition
  /// endpoint dangles or is ambiguous, or names repeat within a scope.
  void validate() const;
  bool operator==(const Statechart&) const = default;
};

/// Statechart with hierarchy removed: leaves only, endpoints resolved.
struct FlatMachine {
  struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    std::string event;
    std::optional<Condition> guard;
    std::vector<std::string> actions;
    bool operator==(const Edge&) const = default;
  };
  std::vector<std::string> states;  // leaf names, declaration order
  std::size_t initial = 0;
  std::vector<Edge> edges;
};

/// Entering a composite enters its initial leaf (recursively); leaving a
/// composite leaves from each of its leaves.
FlatMachine flatten(const Statechart& chart);

/// Insert before original message `position` (0-based gap) or delete the
/// original message at index `position`.
struct RepairEdit {
  enum class Kind { Delete, Insert };
  Kind kind = Kind::Delete;
  std::size_t position = 0;
  Message message;  // Insert only
  bool operator==(const RepairEdit&) const = default;
};

}  // namespace sdebug
