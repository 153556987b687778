#include "sdebug/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <vector>

namespace sdebug {

ParseError::ParseError(SourceSpan span, std::string message, std::optional<std::string> expected)
    : std::runtime_error(span.file + ":" + std::to_string(span.line) + ":" + std::to_string(span.column_begin) +
                         ": " + message + (expected ? " (expected " + *expected + ")" : "")),
      span_(std::move(span)),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

namespace {

bool is_word_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// ---------------------------------------------------------------- .dt ----

struct Token {
  enum class Kind { Word, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int col = 1;
};

std::vector<Token> lex_dt(std::string_view text, const std::string& file) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (is_space(c)) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    std::size_t j = i;
    if (is_word_start(c)) {
      while (j < text.size() && is_word_char(text[j])) ++j;
      t.kind = Token::Kind::Word;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && j + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[j + 1])))) {
      ++j;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Token::Kind::Number;
    } else if (c == '.' && j + 1 < text.size() && text[j + 1] == '.') {
      j += 2;
      t.kind = Token::Kind::Punct;
    } else if (std::string_view(",:;=(){}").find(c) != std::string_view::npos) {
      ++j;
      t.kind = Token::Kind::Punct;
    } else {
      throw ParseError({file, line, col, col}, std::string("unexpected character '") + c + "'");
    }
    t.text = std::string(text.substr(i, j - i));
    advance(j - i);
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class DtParser {
 public:
  DtParser(std::string_view text, std::string file) : file_(std::move(file)), toks_(lex_dt(text, file_)) {}

  DomainTheory run() {
    while (!at_end() && !is_word("context")) parse_declaration();
    while (!at_end()) parse_context();
    try {
      return DomainTheory(std::move(vars_), std::move(specs_));
    } catch (const ModelError& e) {
      throw error(peek(), e.what());
    }
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool is_word(std::string_view w) const { return peek().kind == Token::Kind::Word && peek().text == w; }
  bool at_clause(std::string_view w) const {
    return is_word(w) && pos_ + 1 < toks_.size() && toks_[pos_ + 1].kind == Token::Kind::Punct &&
           toks_[pos_ + 1].text == ":";
  }
  bool is_punct(std::string_view p) const { return peek().kind == Token::Kind::Punct && peek().text == p; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  ParseError error(const Token& t, std::string msg, std::optional<std::string> expected = std::nullopt) const {
    const int width = std::max<int>(1, static_cast<int>(t.text.size()));
    return ParseError({file_, t.line, t.col, t.col + width - 1}, std::move(msg), std::move(expected));
  }

  const Token& expect_punct(std::string_view p) {
    if (!is_punct(p)) throw error(peek(), "unexpected '" + peek().text + "'", "'" + std::string(p) + "'");
    return take();
  }
  const Token& expect_word(std::optional<std::string_view> w = std::nullopt) {
    if (peek().kind != Token::Kind::Word || (w && peek().text != *w)) {
      throw error(peek(), at_end() ? "unexpected end of input" : "unexpected '" + peek().text + "'",
                  w ? "'" + std::string(*w) + "'" : std::string("identifier"));
    }
    return take();
  }

  VarDomain parse_domain() {
    const Token& t = peek();
    try {
      if (is_word("Boolean")) {
        take();
        return VarDomain::boolean();
      }
      if (is_word("enum")) {
        take();
        expect_punct("{");
        std::vector<std::string> labels;
        do {
          if (peek().kind != Token::Kind::Word && peek().kind != Token::Kind::Number)
            throw error(peek(), "bad enumeration label", "label");
          labels.push_back(take().text);
        } while (is_punct(",") && (take(), true));
        expect_punct("}");
        return VarDomain::enumeration(std::move(labels));
      }
      if (peek().kind == Token::Kind::Number) {
        const int lo = std::stoi(take().text);
        expect_punct("..");
        if (peek().kind != Token::Kind::Number) throw error(peek(), "bad range bound", "integer");
        const int hi = std::stoi(take().text);
        return VarDomain::range(lo, hi);
      }
    } catch (const ModelError& e) {
      throw error(t, e.what());
    }
    throw error(t, "unknown type '" + t.text + "'", "Boolean, lo..hi or enum {...}");
  }

  void parse_declaration() {
    std::vector<Token> names{expect_word()};
    while (is_punct(",")) {
      take();
      names.push_back(expect_word());
    }
    expect_punct(":");
    VarDomain d = parse_domain();
    for (const auto& n : names) {
      for (const auto& v : vars_) {
        if (v.name == n.text) throw error(n, "duplicate state variable '" + n.text + "'");
      }
      vars_.push_back({n.text, d, vars_.size()});
    }
  }

  const StateVariable* find_var(std::string_view name) const {
    for (const auto& v : vars_) {
      if (v.name == name) return &v;
    }
    return nullptr;
  }

  Condition parse_condition(const std::vector<Parameter>& params) {
    Condition c;
    if (at_end() || is_word("post") || is_word("context")) return c;
    std::set<std::string> seen;
    while (true) {
      const Token& var = expect_word();
      const StateVariable* sv = find_var(var.text);
      if (!sv) throw error(var, "unknown state variable '" + var.text + "'");
      if (!seen.insert(var.text).second) throw error(var, "variable '" + var.text + "' constrained twice");
      expect_punct("=");
      if (peek().kind != Token::Kind::Word && peek().kind != Token::Kind::Number)
        throw error(peek(), "missing value", "literal or parameter");
      const Token& val = take();
      auto param = std::find_if(params.begin(), params.end(), [&](const Parameter& p) { return p.name == val.text; });
      if (param != params.end()) {
        for (int code : param->domain.codes()) {
          if (!sv->domain.parse_literal(param->domain.literal(code)))
            throw error(val, "parameter '" + val.text + "' ranges outside the domain of " + sv->name);
        }
      } else if (!sv->domain.parse_literal(val.text)) {
        throw error(val, "literal '" + val.text + "' outside domain of " + sv->name + " (" + sv->domain.describe() + ")");
      }
      c.atoms.push_back({var.text, val.text});
      if (is_word("and")) {
        take();
        continue;
      }
      if (is_punct(";")) {
        take();
        break;
      }
      if (at_end() || is_word("post") || is_word("context")) break;
      throw error(peek(), "unexpected '" + peek().text + "'", "'and' or ';'");
    }
    return c;
  }

  void parse_context() {
    const Token& kw = expect_word("context");
    std::string label;
    while ((peek().kind == Token::Kind::Word || peek().kind == Token::Kind::Number) && !at_clause("pre") &&
           !at_clause("post")) {
      if (!label.empty()) label += ' ';
      label += take().text;
    }
    if (label.empty()) throw error(peek(), "context without a message name", "message name");
    MessageSpec spec;
    spec.name = label;
    if (is_punct("(")) {
      take();
      while (true) {
        const Token& pn = expect_word();
        expect_punct(":");
        spec.params.push_back({pn.text, parse_domain()});
        if (is_punct(",")) {
          take();
          continue;
        }
        expect_punct(")");
        break;
      }
    }
    for (const auto& s : specs_) {
      if (equal_ignore_case(s.name, spec.name)) throw error(kw, "duplicate context '" + spec.name + "'");
    }
    // Either clause may be omitted; an omitted clause is an empty condition.
    if (at_clause("pre")) {
      take();
      take();
      spec.pre = parse_condition(spec.params);
    }
    if (at_clause("post")) {
      take();
      take();
      spec.post = parse_condition(spec.params);
    }
    specs_.push_back(std::move(spec));
  }

  std::string file_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<StateVariable> vars_;
  std::vector<MessageSpec> specs_;
};

// ------------------------------------------------------- line helpers ----

struct Line {
  int number = 0;
  std::string_view raw;      // without comment
  std::string_view comment;  // text after '#', trimmed
  int indent = 0;            // 0-based column of first non-space character
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(start, end - start);
    ++number;
    Line line;
    line.number = number;
    const std::size_t hash = l.find('#');
    if (hash != std::string_view::npos) {
      line.comment = trim(l.substr(hash + 1));
      l = l.substr(0, hash);
    }
    std::size_t k = 0;
    while (k < l.size() && is_space(l[k])) ++k;
    line.indent = static_cast<int>(k);
    line.raw = l;
    if (!trim(l).empty() || !line.comment.empty()) out.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

ParseError line_error(const std::string& file, const Line& line, std::string_view at, std::string msg,
                      std::optional<std::string> expected = std::nullopt) {
  int col = line.indent + 1;
  int col_end = static_cast<int>(line.raw.size());
  if (!at.empty() && at.data() >= line.raw.data() && at.data() <= line.raw.data() + line.raw.size()) {
    col = static_cast<int>(at.data() - line.raw.data()) + 1;
    col_end = col + static_cast<int>(at.size()) - 1;
  }
  col_end = std::max(col_end, col);
  return ParseError({file, line.number, col, col_end}, std::move(msg), std::move(expected));
}

bool is_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

bool valid_label(std::string_view s) {
  return !s.empty() && s.find_first_of("[]/;:,#(){}") == std::string_view::npos;
}

// Splits at commas outside parentheses.
std::vector<std::string_view> split_top_level(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

// First whitespace-separated word and the remainder.
std::pair<std::string_view, std::string_view> head_word(std::string_view s) {
  s = trim(s);
  std::size_t k = 0;
  while (k < s.size() && !is_space(s[k])) ++k;
  return {s.substr(0, k), trim(s.substr(k))};
}

// ---------------------------------------------------------------- .sd ----

class SdParser {
 public:
  SdParser(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  SequenceDiagram run() {
    SequenceDiagram sd;
    bool have_header = false;
    std::vector<std::pair<const Line*, NoLoop>> loops;
    const auto lines = split_lines(text_);
    for (const auto& line : lines) {
      auto [kw, rest] = head_word(line.raw);
      if (kw.empty()) continue;
      if (kw == "sd") {
        if (have_header) throw line_error(file_, line, kw, "duplicate 'sd' header");
        if (!is_name(rest)) throw line_error(file_, line, rest, "bad diagram name", "name");
        sd.name = std::string(rest);
        have_header = true;
        continue;
      }
      if (!have_header) throw line_error(file_, line, kw, "missing header", "'sd <name>'");
      if (kw == "objects" || kw == "object") {
        for (auto o : split_top_level(rest)) {
          if (!is_name(o)) throw line_error(file_, line, o, "bad object name", "name");
          if (sd.has_object(o)) throw line_error(file_, line, o, "duplicate object '" + std::string(o) + "'");
          sd.objects.emplace_back(o);
        }
      } else if (kw == "msg") {
        sd.messages.push_back(parse_message(line, rest, sd));
      } else if (kw == "assume") {
        auto [what, nums] = head_word(rest);
        if (what != "no-loop") throw line_error(file_, line, what, "unknown assumption", "'no-loop'");
        auto [a, b] = head_word(nums);
        NoLoop nl{to_int(line, a), to_int(line, b)};
        if (nl.first > nl.last) std::swap(nl.first, nl.last);
        loops.emplace_back(&line, nl);
      } else {
        throw line_error(file_, line, kw, "unknown directive '" + std::string(kw) + "'",
                         "'objects', 'msg' or 'assume'");
      }
    }
    if (!have_header) throw ParseError({file_, 1, 1, 1}, "missing header", "'sd <name>'");
    const int n = static_cast<int>(sd.messages.size());
    for (const auto& [line, nl] : loops) {
      if (nl.first < 1 || nl.last > n)
        throw line_error(file_, *line, line->raw, "no-loop refers to a message outside 1.." + std::to_string(n));
      sd.no_loops.push_back(nl);
    }
    return sd;
  }

 private:
  int to_int(const Line& line, std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
      throw line_error(file_, line, s, "bad number '" + std::string(s) + "'", "integer");
    return v;
  }

  Message parse_message(const Line& line, std::string_view rest, const SequenceDiagram& sd) {
    auto [num, body] = head_word(rest);
    Message m;
    m.id = to_int(line, num);
    if (m.id != static_cast<int>(sd.messages.size()) + 1)
      throw line_error(file_, line, num, "message id out of sequence",
                       std::to_string(sd.messages.size() + 1));
    const std::size_t arrow = body.find("->");
    const std::size_t colon = body.find(':');
    if (arrow == std::string_view::npos || colon == std::string_view::npos || colon < arrow)
      throw line_error(file_, line, body, "malformed message", "'<sender> -> <receiver> : <label>'");
    const auto sender = trim(body.substr(0, arrow));
    const auto receiver = trim(body.substr(arrow + 2, colon - arrow - 2));
    for (auto o : {sender, receiver}) {
      if (!sd.has_object(o)) throw line_error(file_, line, o, "undeclared object '" + std::string(o) + "'");
    }
    m.sender = std::string(sender);
    m.receiver = std::string(receiver);
    auto label = trim(body.substr(colon + 1));
    const std::size_t open = label.find('(');
    if (open != std::string_view::npos) {
      if (label.back() != ')') throw line_error(file_, line, label, "unterminated argument list", "')'");
      for (auto a : split_top_level(label.substr(open + 1, label.size() - open - 2))) {
        if (!is_name(a)) throw line_error(file_, line, a, "bad argument", "literal");
        m.args.emplace_back(a);
      }
      label = trim(label.substr(0, open));
    }
    if (!valid_label(label)) throw line_error(file_, line, label, "bad message label", "label");
    m.label = std::string(label);
    return m;
  }

  std::string_view text_;
  std::string file_;
};

// ---------------------------------------------------------------- .sc ----

std::optional<Condition> parse_guard(std::string_view g) {
  Condition c;
  g = trim(g);
  if (g.empty()) return c;
  std::size_t start = 0;
  while (true) {
    std::size_t next = g.find(" and ", start);
    auto atom = trim(g.substr(start, next == std::string_view::npos ? std::string_view::npos : next - start));
    const std::size_t eq = atom.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    auto var = trim(atom.substr(0, eq));
    auto val = trim(atom.substr(eq + 1));
    if (!is_name(var) || !is_name(val)) return std::nullopt;
    c.atoms.push_back({std::string(var), std::string(val)});
    if (next == std::string_view::npos) break;
    start = next + 5;
  }
  return c;
}

class ScParser {
 public:
  ScParser(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  Statechart run() {
    lines_ = split_lines(text_);
    Statechart chart;
    Frame root;
    std::vector<Frame> stack{root};
    bool seen_content = false;
    for (const auto& line : lines_) {
      auto [kw, rest] = head_word(line.raw);
      if (kw.empty()) continue;
      Frame& top = stack.back();
      if (kw == "statechart") {
        if (seen_content || !chart.object.empty())
          throw line_error(file_, line, kw, "'statechart' header must come first");
        if (!is_name(rest)) throw line_error(file_, line, rest, "bad object name", "name");
        chart.object = std::string(rest);
        continue;
      }
      seen_content = true;
      if (kw == "state") {
        std::string_view name = rest;
        bool opens = false;
        if (!name.empty() && name.back() == '{') {
          opens = true;
          name = trim(name.substr(0, name.size() - 1));
        }
        if (!is_name(name)) throw line_error(file_, line, name, "bad state name", "name");
        for (const auto& s : top.states) {
          if (s.name == name) throw line_error(file_, line, name, "duplicate state '" + std::string(name) + "'");
        }
        State s;
        s.name = std::string(name);
        s.comment = std::string(line.comment);
        if (opens) {
          Frame f;
          f.self = std::move(s);
          f.open_line = &line;
          stack.push_back(std::move(f));
        } else {
          top.states.push_back(std::move(s));
        }
      } else if (kw == "}") {
        if (stack.size() == 1) throw line_error(file_, line, kw, "unbalanced '}'");
        if (!rest.empty()) throw line_error(file_, line, rest, "unexpected text after '}'");
        Frame done = std::move(stack.back());
        stack.pop_back();
        close_scope(done, line);
        State s = std::move(done.self);
        s.children = std::move(done.states);
        s.initial = std::move(done.initial);
        s.transitions = std::move(done.transitions);
        stack.back().states.push_back(std::move(s));
      } else if (kw == "initial") {
        if (!top.initial.empty()) throw line_error(file_, line, kw, "second initial marker in scope");
        if (!is_name(rest)) throw line_error(file_, line, rest, "bad state name", "name");
        top.initial = std::string(rest);
        top.initial_line = &line;
      } else {
        top.transitions.push_back(parse_transition(line));
        top.transition_lines.push_back(&line);
      }
    }
    if (stack.size() != 1) throw line_error(file_, *stack.back().open_line, {}, "unclosed state block", "'}'");
    const Line end_line{lines_.empty() ? 1 : lines_.back().number, {}, {}, 0};
    close_scope(stack.back(), end_line);
    chart.states = std::move(stack.back().states);
    chart.initial = std::move(stack.back().initial);
    chart.transitions = std::move(stack.back().transitions);
    return chart;
  }

 private:
  struct Frame {
    State self;
    const Line* open_line = nullptr;
    std::vector<State> states;
    std::string initial;
    const Line* initial_line = nullptr;
    std::vector<Transition> transitions;
    std::vector<const Line*> transition_lines;
  };

  static void collect(const std::vector<State>& states, std::string_view name, int& hits) {
    for (const auto& s : states) {
      if (s.name == name) ++hits;
      collect(s.children, name, hits);
    }
  }

  static bool resolves(const std::vector<State>& scope, std::string_view name) {
    for (const auto& s : scope) {
      if (s.name == name) return true;
    }
    int hits = 0;
    for (const auto& s : scope) collect(s.children, name, hits);
    return hits == 1;
  }

  void close_scope(const Frame& f, const Line& at) {
    if (f.states.empty()) throw line_error(file_, at, {}, "scope declares no states", "'state <name>'");
    if (f.initial.empty()) throw line_error(file_, at, {}, "missing initial state", "'initial <name>'");
    if (std::none_of(f.states.begin(), f.states.end(), [&](const State& s) { return s.name == f.initial; }))
      throw line_error(file_, *f.initial_line, f.initial, "initial state '" + f.initial + "' not declared here");
    for (std::size_t i = 0; i < f.transitions.size(); ++i) {
      for (const auto& end : {f.transitions[i].from, f.transitions[i].to}) {
        if (!resolves(f.states, end)) {
          const Line& l = *f.transition_lines[i];
          auto pos = l.raw.find(end);
          throw line_error(file_, l, pos == std::string_view::npos ? std::string_view{} : l.raw.substr(pos, end.size()),
                           "dangling or ambiguous transition endpoint '" + end + "'");
        }
      }
    }
  }

  Transition parse_transition(const Line& line) {
    std::string_view body = trim(line.raw);
    const std::size_t arrow = body.find("->");
    const std::size_t colon = body.find(':');
    if (arrow == std::string_view::npos || colon == std::string_view::npos || colon < arrow)
      throw line_error(file_, line, body, "unrecognised line", "'state', 'initial', '}' or '<from> -> <to> : <label>'");
    Transition t;
    auto from = trim(body.substr(0, arrow));
    auto to = trim(body.substr(arrow + 2, colon - arrow - 2));
    if (!is_name(from)) throw line_error(file_, line, from, "bad state name", "name");
    if (!is_name(to)) throw line_error(file_, line, to, "bad state name", "name");
    t.from = std::string(from);
    t.to = std::string(to);
    std::string_view label = body.substr(colon + 1);
    const std::size_t cut = label.find_first_of("[/");
    t.event = std::string(trim(label.substr(0, cut)));
    if (!t.event.empty()) check_call(line, t.event);
    if (cut == std::string_view::npos) return t;
    label = label.substr(cut);
    if (label.front() == '[') {
      const std::size_t close = label.find(']');
      if (close == std::string_view::npos) throw line_error(file_, line, label, "unterminated guard", "']'");
      t.guard = parse_guard(label.substr(1, close - 1));
      if (!t.guard) throw line_error(file_, line, label.substr(0, close + 1), "malformed guard", "'var = value and ...'");
      label = trim(label.substr(close + 1));
      if (label.empty()) return t;
      if (label.front() != '/') throw line_error(file_, line, label, "unexpected text after guard", "'/'");
    }
    for (auto a : split_top_level(label.substr(1))) {
      if (a.empty()) throw line_error(file_, line, label, "empty action", "action");
      check_call(line, a);
      t.actions.emplace_back(a);
    }
    return t;
  }

  // `Label` or `Label(arg, ...)`.
  void check_call(const Line& line, std::string_view s) {
    const std::size_t open = s.find('(');
    auto name = trim(s.substr(0, open));
    bool ok = valid_label(name);
    if (open != std::string_view::npos) ok = ok && s.back() == ')';
    if (!ok) throw line_error(file_, line, s, "bad event or action '" + std::string(s) + "'", "label");
  }

  std::string_view text_;
  std::string file_;
  std::vector<Line> lines_;
};

void print_states(std::string& out, const std::vector<State>& states, const std::string& initial,
                  const std::vector<Transition>& transitions, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  for (const auto& s : states) {
    out += pad + "state " + s.name;
    if (s.composite()) out += " {";
    if (!s.comment.empty()) out += "  # " + s.comment;
    out += '\n';
    if (s.composite()) {
      print_states(out, s.children, s.initial, s.transitions, depth + 1);
      out += pad + "}\n";
    }
  }
  out += pad + "initial " + initial + "\n";
  for (const auto& t : transitions) {
    out += pad + t.from + " -> " + t.to + " :";
    const std::string label = print_transition_label(t);
    if (!label.empty()) out += " " + label;
    out += '\n';
  }
}

}  // namespace

DomainTheory parse_domain_theory(std::string_view text, std::string_view file) {
  return DtParser(text, std::string(file)).run();
}

SequenceDiagram parse_sd(std::string_view text, std::string_view file) {
  return SdParser(text, std::string(file)).run();
}

Statechart parse_sc(std::string_view text, std::string_view file) { return ScParser(text, std::string(file)).run(); }

std::string print_condition(const Condition& c) {
  std::string s;
  for (std::size_t i = 0; i < c.atoms.size(); ++i) {
    if (i) s += " and ";
    s += c.atoms[i].variable + " = " + c.atoms[i].value;
  }
  return s;
}

std::string print_domain_theory(const DomainTheory& dt) {
  std::string out;
  for (const auto& v : dt.variables()) out += v.name + " : " + v.domain.describe() + "\n";
  for (const auto& s : dt.specs()) {
    out += "\ncontext " + s.name;
    if (!s.params.empty()) {
      out += " (";
      for (std::size_t i = 0; i < s.params.size(); ++i) {
        if (i) out += ", ";
        out += s.params[i].name + " : " + s.params[i].domain.describe();
      }
      out += ")";
    }
    out += "\n  pre:";
    if (!s.pre.empty()) out += " " + print_condition(s.pre) + " ;";
    out += "\n  post:";
    if (!s.post.empty()) out += " " + print_condition(s.post) + " ;";
    out += "\n";
  }
  return out;
}

std::string print_message_line(const Message& m) {
  return "msg " + std::to_string(m.id) + " " + m.sender + " -> " + m.receiver + " : " + m.text();
}

std::string print_sd(const SequenceDiagram& sd) {
  std::string out = "sd " + sd.name + "\n";
  if (!sd.objects.empty()) {
    out += "objects ";
    for (std::size_t i = 0; i < sd.objects.size(); ++i) {
      if (i) out += ", ";
      out += sd.objects[i];
    }
    out += "\n";
  }
  for (const auto& m : sd.messages) out += print_message_line(m) + "\n";
  for (const auto& nl : sd.no_loops)
    out += "assume no-loop " + std::to_string(nl.first) + " " + std::to_string(nl.last) + "\n";
  return out;
}

std::string print_transition_label(const Transition& t) {
  std::string s = t.event;
  if (t.guard) s += (s.empty() ? "[" : " [") + print_condition(*t.guard) + "]";
  if (!t.actions.empty()) {
    s += s.empty() ? "/ " : " / ";
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
      if (i) s += ", ";
      s += t.actions[i];
    }
  }
  return s;
}

std::string print_sc(const Statechart& chart) {
  std::string out;
  if (!chart.object.empty()) out += "statechart " + chart.object + "\n";
  print_states(out, chart.states, chart.initial, chart.transitions, 0);
  return out;
}

}  // namespace sdebug
