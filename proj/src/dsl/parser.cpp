#include <algorithm>
#include <cstdlib>
#include <map>

#include "wiredsys/dsl/model.hpp"
#include "wiredsys/error.hpp"

namespace wiredsys::dsl {

namespace {

constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  double value = 0.0;
  SourceLoc loc;
};

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct LexError {
  SourceLoc loc;
  std::string message;
};

std::vector<Token> lex(std::string_view text, std::vector<Diagnostic>& diags) {
  std::vector<Token> tokens;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto loc = [&] { return SourceLoc{line, col}; };
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
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (is_ident_start(c)) {
      const SourceLoc at = loc();
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      tokens.push_back({Token::Kind::Ident, std::string(text.substr(i, j - i)), 0.0, at});
      advance(j - i);
      continue;
    }
    if (is_digit(c)) {
      const SourceLoc at = loc();
      std::size_t j = i;
      while (j < text.size() && is_digit(text[j])) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && is_digit(text[j])) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && is_digit(text[k])) {
          j = k;
          while (j < text.size() && is_digit(text[j])) ++j;
        }
      }
      const std::string lexeme(text.substr(i, j - i));
      tokens.push_back({Token::Kind::Number, lexeme, std::strtod(lexeme.c_str(), nullptr), at});
      advance(j - i);
      continue;
    }
    // Union sign, UTF-8 encoded.
    if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0x88 &&
        static_cast<unsigned char>(text[i + 2]) == 0xAA) {
      tokens.push_back({Token::Kind::Punct, "u", 0.0, loc()});
      advance(3);
      continue;
    }
    if (c == '<' && i + 1 < text.size() && text[i + 1] == '-') {
      tokens.push_back({Token::Kind::Punct, "<-", 0.0, loc()});
      advance(2);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      tokens.push_back({Token::Kind::Punct, "->", 0.0, loc()});
      advance(2);
      continue;
    }
    if (std::string("()[]{};:,.=-").find(c) != std::string::npos) {
      tokens.push_back({Token::Kind::Punct, std::string(1, c), 0.0, loc()});
      advance(1);
      continue;
    }
    diags.push_back({Diagnostic::Severity::Error, loc(),
                     std::string("unexpected character '") + c + "'"});
    advance(1);
  }
  tokens.push_back({Token::Kind::End, "", 0.0, loc()});
  return tokens;
}

struct ParseError {
  SourceLoc loc;
  std::string message;
};

const std::vector<std::string> kTopLevel = {
    "type", "box",  "wiring", "moore", "lti", "fn",
    "linfn", "contract", "timecontract", "test", "kb", "attack"};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
      : tokens_(std::move(tokens)), diags_(diags) {}

  Model run() {
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind != Token::Kind::Ident ||
          std::find(kTopLevel.begin(), kTopLevel.end(), t.text) == kTopLevel.end()) {
        error_here("expected a declaration keyword");
        synchronize();
        continue;
      }
      try {
        declaration(t.text);
      } catch (const ParseError& e) {
        diags_.push_back({Diagnostic::Severity::Error, e.loc, e.message});
        synchronize();
      }
    }
    return std::move(model_);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic>& diags_;
  Model model_;

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  const Token& take() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError{peek().loc, message};
  }
  void error_here(const std::string& message) {
    diags_.push_back({Diagnostic::Severity::Error, peek().loc, message});
  }

  void synchronize() {
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind == Token::Kind::Ident &&
          std::find(kTopLevel.begin(), kTopLevel.end(), t.text) != kTopLevel.end()) {
        return;
      }
      ++pos_;
    }
  }

  bool accept_punct(const std::string& p) {
    if (peek().kind == Token::Kind::Punct && peek().text == p) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_punct(const std::string& p) {
    if (!accept_punct(p)) fail("expected '" + p + "'");
  }
  bool accept_keyword(const std::string& k) {
    if (peek().kind == Token::Kind::Ident && peek().text == k) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_keyword(const std::string& k) {
    if (!accept_keyword(k)) fail("expected '" + k + "'");
  }
  std::string expect_ident(const std::string& what) {
    if (peek().kind != Token::Kind::Ident) fail("expected " + what);
    return take().text;
  }
  // Labels may be identifiers or bare numerals.
  std::string expect_label() {
    if (peek().kind == Token::Kind::Ident || peek().kind == Token::Kind::Number) {
      return take().text;
    }
    fail("expected a value label");
  }
  double expect_number() {
    const bool neg = accept_punct("-");
    if (peek().kind != Token::Kind::Number) fail("expected a number");
    const double v = take().value;
    return neg ? -v : v;
  }
  std::size_t expect_count(const std::string& what) {
    const double v = expect_number();
    if (v < 0 || v > 1e9 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      fail("expected a small nonnegative integer for " + what);
    }
    return static_cast<std::size_t>(v);
  }
  std::size_t expect_index() {
    expect_punct("[");
    const std::size_t k = expect_count("an index");
    expect_punct("]");
    return k;
  }
  void optional_semicolon() { accept_punct(";"); }

  // ---- resolution helpers ----------------------------------------------

  const TypeDecl& resolve_type(const std::string& name, SourceLoc loc) {
    if (const TypeDecl* t = model_.find_type(name)) return *t;
    throw ParseError{loc, "unknown type '" + name + "'"};
  }
  const BoxDecl& resolve_box(const std::string& name, SourceLoc loc) {
    if (const BoxDecl* b = model_.find_box(name)) return *b;
    throw ParseError{loc, "unknown box '" + name + "'"};
  }
  std::size_t resolve_finite_label(const wd::PortType& t, const std::string& label,
                                   SourceLoc loc) {
    if (!wd::is_finite(t)) throw ParseError{loc, "port is not finite-set typed"};
    const auto& labels = std::get<wd::FiniteSet>(t).labels;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) return i;
    }
    throw ParseError{loc, "label '" + label + "' is not in carrier of type '" +
                              std::get<wd::FiniteSet>(t).name + "'"};
  }

  void check_unique(const std::string& kind, const std::string& name, bool exists,
                    SourceLoc loc) {
    if (exists) throw ParseError{loc, kind + " '" + name + "' is already declared"};
  }

  // ---- declarations ------------------------------------------------------

  void declaration(const std::string& keyword) {
    if (keyword == "type") return type_decl();
    if (keyword == "box") return box_decl();
    if (keyword == "wiring") return wiring_decl();
    if (keyword == "moore") return moore_decl();
    if (keyword == "lti") return lti_decl();
    if (keyword == "fn") return fn_decl();
    if (keyword == "linfn") return linfn_decl();
    if (keyword == "contract") return contract_decl();
    if (keyword == "timecontract") return timecontract_decl();
    if (keyword == "test") return test_decl();
    if (keyword == "kb") return kb_decl();
    if (keyword == "attack") return attack_decl();
    fail("unknown declaration '" + keyword + "'");
  }

  void type_decl() {
    const SourceLoc loc = peek().loc;
    expect_keyword("type");
    const std::string name = expect_ident("a type name");
    check_unique("type", name, model_.find_type(name) != nullptr, loc);
    expect_punct("=");
    wd::PortType type = wd::LinSpace{1};
    if (accept_keyword("fin")) {
      expect_punct("{");
      wd::FiniteSet fs;
      fs.name = name;
      if (!accept_punct("}")) {
        do {
          fs.labels.push_back(expect_label());
        } while (accept_punct(","));
        expect_punct("}");
      }
      for (std::size_t i = 0; i < fs.labels.size(); ++i) {
        for (std::size_t j = i + 1; j < fs.labels.size(); ++j) {
          if (fs.labels[i] == fs.labels[j]) {
            throw ParseError{loc, "duplicate label '" + fs.labels[i] + "'"};
          }
        }
      }
      if (fs.labels.empty()) throw ParseError{loc, "finite type needs at least one label"};
      type = fs;
    } else if (accept_keyword("lin")) {
      const std::size_t dim = expect_count("a dimension");
      if (dim == 0) throw ParseError{loc, "linear type dimension must be at least 1"};
      type = wd::LinSpace{static_cast<int>(dim)};
    } else {
      fail("expected 'fin' or 'lin'");
    }
    optional_semicolon();
    model_.types.push_back({name, std::move(type), loc});
  }

  void box_decl() {
    const SourceLoc loc = peek().loc;
    expect_keyword("box");
    BoxDecl decl;
    decl.loc = loc;
    decl.name = expect_ident("a box name");
    check_unique("box", decl.name, model_.find_box(decl.name) != nullptr, loc);
    expect_punct("(");
    expect_keyword("in");
    expect_punct(":");
    while (peek().kind == Token::Kind::Ident) {
      const SourceLoc at = peek().loc;
      const std::string tn = take().text;
      decl.input_types.push_back(tn);
      decl.iface.inputs.push_back(resolve_type(tn, at).type);
      if (!accept_punct(",")) break;
    }
    expect_punct(";");
    expect_keyword("out");
    expect_punct(":");
    while (peek().kind == Token::Kind::Ident) {
      const SourceLoc at = peek().loc;
      const std::string tn = take().text;
      decl.output_types.push_back(tn);
      decl.iface.outputs.push_back(resolve_type(tn, at).type);
      if (!accept_punct(",")) break;
    }
    expect_punct(")");
    optional_semicolon();
    decl.iface.name = decl.name;
    model_.boxes.push_back(std::move(decl));
  }

  void wiring_decl() {
    const SourceLoc loc = peek().loc;
    expect_keyword("wiring");
    WiringDecl decl;
    decl.loc = loc;
    decl.name = expect_ident("a wiring name");
    check_unique("wiring", decl.name, model_.find_wiring(decl.name) != nullptr, loc);
    expect_punct(":");
    expect_punct("[");
    if (!accept_punct("]")) {
      do {
        const SourceLoc at = peek().loc;
        const std::string bn = expect_ident("an inner box name");
        decl.inner_names.push_back(bn);
        decl.diagram.inner.push_back(resolve_box(bn, at).iface);
      } while (accept_punct(","));
      expect_punct("]");
    }
    expect_punct("->");
    {
      const SourceLoc at = peek().loc;
      decl.outer_name = expect_ident("an outer box name");
      decl.diagram.outer = resolve_box(decl.outer_name, at).iface;
    }

    auto& d = decl.diagram;
    d.input_sources.resize(d.inner.size());
    for (std::size_t b = 0; b < d.inner.size(); ++b) {
      d.input_sources[b].assign(d.inner[b].inputs.size(), wd::OuterInput{kUnassigned});
    }
    d.output_sources.assign(d.outer.outputs.size(), wd::InnerOutput{kUnassigned, 0});
    std::vector<std::vector<bool>> in_set(d.inner.size());
    for (std::size_t b = 0; b < d.inner.size(); ++b) {
      in_set[b].assign(d.inner[b].inputs.size(), false);
    }
    std::vector<bool> out_set(d.outer.outputs.size(), false);

    auto inner_index = [&](const std::string& name, SourceLoc at) -> std::size_t {
      std::size_t found = kUnassigned;
      for (std::size_t b = 0; b < decl.inner_names.size(); ++b) {
        if (decl.inner_names[b] != name) continue;
        if (found != kUnassigned) {
          throw ParseError{at, "box name '" + name +
                                   "' appears more than once in the inner list; "
                                   "references are ambiguous"};
        }
        found = b;
      }
      if (found == kUnassigned) {
        throw ParseError{at, "'" + name + "' is not an inner box of this wiring"};
      }
      return found;
    };
    auto parse_source = [&]() -> wd::Source {
      const SourceLoc at = peek().loc;
      const std::string head = expect_ident("a source");
      expect_punct(".");
      const std::string side = expect_ident("'in' or 'out'");
      const std::size_t k = expect_index();
      if (head == "outer") {
        if (side == "out") {
          throw ParseError{at, "outer outputs cannot be sources"};
        }
        if (side != "in") throw ParseError{at, "expected outer.in[...]"};
        if (k >= d.outer.inputs.size()) {
          throw ParseError{at, "outer input index out of range"};
        }
        return wd::OuterInput{k};
      }
      const std::size_t b = inner_index(head, at);
      if (side != "out") {
        throw ParseError{at, "only output ports can act as sources"};
      }
      if (k >= d.inner[b].outputs.size()) {
        throw ParseError{at, "output port index out of range on '" + head + "'"};
      }
      return wd::InnerOutput{b, k};
    };

    expect_punct("{");
    while (!accept_punct("}")) {
      const SourceLoc at = peek().loc;
      const std::string head = expect_ident("a destination");
      expect_punct(".");
      const std::string side = expect_ident("'in' or 'out'");
      const std::size_t k = expect_index();
      expect_punct("<-");
      if (head == "outer") {
        if (side != "out") {
          throw ParseError{at, "outer inputs cannot be destinations"};
        }
        if (k >= d.outer.outputs.size()) {
          throw ParseError{at, "outer output index out of range"};
        }
        const wd::Source src = parse_source();
        if (!std::holds_alternative<wd::InnerOutput>(src)) {
          throw ParseError{at, "outer outputs must be fed from inner outputs"};
        }
        if (out_set[k]) throw ParseError{at, "outer output assigned twice"};
        d.output_sources[k] = std::get<wd::InnerOutput>(src);
        out_set[k] = true;
      } else {
        const std::size_t b = inner_index(head, at);
        if (side != "in") {
          throw ParseError{at, "only input ports can be destinations"};
        }
        if (k >= d.inner[b].inputs.size()) {
          throw ParseError{at, "input port index out of range on '" + head + "'"};
        }
        if (in_set[b][k]) throw ParseError{at, "input port assigned twice"};
        d.input_sources[b][k] = parse_source();
        in_set[b][k] = true;
      }
      expect_punct(";");
    }
    optional_semicolon();

    for (std::size_t b = 0; b < d.inner.size(); ++b) {
      for (std::size_t p = 0; p < in_set[b].size(); ++p) {
        if (!in_set[b][p]) {
          diags_.push_back({Diagnostic::Severity::Error, loc,
                            "wiring '" + decl.name + "': no source for " +
                                decl.inner_names[b] + ".in[" + std::to_string(p) + "]"});
        }
      }
    }
    for (std::size_t j = 0; j < out_set.size(); ++j) {
      if (!out_set[j]) {
        diags_.push_back({Diagnostic::Severity::Error, loc,
                          "wiring '" + decl.name + "': no source for outer.out[" +
                              std::to_string(j) + "]"});
      }
    }
    model_.wirings.push_back(std::move(decl));
  }

  wd::Tuple parse_label_tuple(const std::vector<wd::PortType>& ports,
                              const std::string& what) {
    const SourceLoc at = peek().loc;
    expect_punct("(");
    std::vector<std::string> labels;
    if (!accept_punct(")")) {
      do {
        labels.push_back(expect_label());
      } while (accept_punct(","));
      expect_punct(")");
    }
    if (labels.size() != ports.size()) {
      throw ParseError{at, what + " has arity " + std::to_string(labels.size()) +
                               ", expected " + std::to_string(ports.size())};
    }
    wd::Tuple t;
    for (std::size_t p = 0; p < labels.size(); ++p) {
      t.push_back(resolve_finite_label(ports[p], labels[p], at));
    }
    return t;
  }

  void moore_decl() {
    const SourceLoc loc = peek().loc;
    expect_keyword("moore");
    MooreDecl decl;
    decl.loc = loc;
    decl.name = expect_ident("a machine name");
    check_unique("behavior", decl.name, model_.find_behavior(decl.name).has_value(), loc);
    expect_keyword("for");
    const SourceLoc bat = peek().loc;
    decl.box = expect_ident("a box name");
    const BoxDecl& box = resolve_box(decl.box, bat);

    behavior::MooreMachine& m = decl.machine;
    m.iface = box.iface;
    m.iface.name = decl.name;

    expect_punct("{");
    expect_keyword("states");
    expect_punct("{");
    do {
      m.states.push_back(expect_label());
    } while (accept_punct(","));
    expect_punct("}");
    expect_punct(";");

    auto state_index = [&](const std::string& s, SourceLoc at) -> std::size_t {
      for (std::size_t i = 0; i < m.states.size(); ++i) {
        if (m.states[i] == s) return i;
      }
      throw ParseError{at, "unknown state '" + s + "'"};
    };

    expect_keyword("init");
    {
      const SourceLoc at = peek().loc;
      m.init = state_index(expect_label(), at);
    }
    expect_punct(";");

    const std::size_t in_count = m.input_count();
    m.update.assign(m.states.size(), std::vector<std::size_t>(in_count, kUnassigned));
    m.readout.assign(m.states.size(), wd::Tuple{});

    expect_keyword("update");
    expect_punct("{");
    while (!accept_punct("}")) {
      const SourceLoc at = peek().loc;
      expect_punct("(");
      const std::size_t s = state_index(expect_label(), at);
      expect_punct(",");
      const wd::Tuple in = parse_label_tuple(m.iface.inputs, "update input");
      expect_punct(")");
      expect_punct("->");
      const std::size_t next = state_index(expect_label(), peek().loc);
      const std::size_t xi = wd::tuple_to_index(m.iface.inputs, in);
      if (m.update[s][xi] != kUnassigned) {
        throw ParseError{at, "duplicate update row"};
      }
      m.update[s][xi] = next;
      expect_punct(";");
    }
    expect_punct(";");

    expect_keyword("readout");
    expect_punct("{");
    while (!accept_punct("}")) {
      const SourceLoc at = peek().loc;
      const std::size_t s = state_index(expect_label(), at);
      expect_punct("->");
      const wd::Tuple out = parse_label_tuple(m.iface.outputs, "readout output");
      if (!m.readout[s].empty() || m.iface.outputs.empty()) {
        // Zero-output machines key duplicates by a sentinel marker.
        if (!m.readout[s].empty()) throw ParseError{at, "duplicate readout row"};
      }
      m.readout[s] = out;
      expect_punct(";");
    }
    expect_punct(";");
    expect_punct("}");
    optional_semicolon();
    model_.moores.push_back(std::move(decl));
  }

  Eigen::MatrixXd parse_matrix() {
    const SourceLoc at = peek().loc;
    expect_punct("[");
    std::vector<std::vector<double>> rows;
    if (!accept_punct("]")) {
      do {
        expect_punct("[");
        std::vector<double> row;
        if (!accept_punct("]")) {
          do {
            row.push_back(expect_number());
          } while (accept_punct(","));
          expect_punct("]");
        }
        rows.push_back(std::move(row));
      } while (accept_punct(","));
      expect_punct("]");
    }
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (const auto& row : rows) {
      if (row.size() != cols) throw ParseError{at, "matrix rows have differing lengths"};
    }
    Eigen::MatrixXd m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  void lti_decl() {
    const SourceLoc loc = peek().loc;
    expect_keyword("lti");
    LtiDecl decl;
    decl.loc = loc;
    decl.name = expect_ident("a system name");
    check_unique("behavior", decl.name, model_.find_behavior(decl.name).has_value(), loc);
    expect_keyword("for");
    const SourceLoc bat = peek().loc;
    decl.box = expect_ident("a box name");
    decl.system.iface = resolve_box(decl.box, bat).iface;
    decl.system.iface.name = decl.name;

    expect_punct("{");
    bool got_a = false, got_b = false, got_c = false;
    while (!accept_punct("}")) {
      const std::string key = expect_ident("a matrix name (A, B, or C)");
      expect_punct("=");
      const Eigen::MatrixXd m = parse_matrix();
      if (key == "A") {
        decl.system.A = m;
        got_a = true;
      } else if (key == "B") {
        decl.system.B = m;
        got_b = true;
      } else if (key == "C") {
        decl.system.C = m;
        got_c = true;
      } else {
        fail("unknown matrix '" + key + "'");
      }
      expect_punct(";");
    }
    optional_semicolon();
    if (!got_a || !got_b || !got_c) {
      throw ParseError{loc, "lti block must define A, B, and C"};
    }
    model_.ltis.push_back(std::move(decl));
  }

  void fn_decl() {
    const SourceLoc loc = peek().loc;
    expect_keyword("fn");
    FnDecl decl;
    decl.loc = loc;
    decl.name = expect_ident("a function name");
    check_unique("behavior", decl.name, model_.find_behavior(decl.name).has_value(), loc);
    expect_keyword("for");
    const SourceLoc bat = peek().loc;
    decl.box = expect_ident("a box name");
    const BoxDecl& box = resolve_box(decl.box, bat);
    decl.fn.iface = box.iface;
    decl.fn.iface.name = decl.name;

    const std::size_t in_count = wd::carrier_size(decl.fn.iface.inputs);
    decl.fn.table.assign(in_count, wd::Tuple{});
    std::vector<bool> set(in_count, false);

    expect_punct("{");
    expect_keyword("table");
    expect_punct("{");
    while (!accept_punct("}")) {
      const SourceLoc at = peek().loc;
      const wd::Tuple in = parse_label_tuple(decl.fn.iface.inputs, "table input");
      expect_punct("->");
      const wd::Tuple out = parse_label_tuple(decl.fn.iface.outputs, "table output");
      const std::size_t xi = wd::tuple_to_index(decl.fn.iface.inputs, in);
      if (set[xi]) throw ParseError{at, "duplicate table row"};
      decl.fn.table[xi] = out;
      set[xi] = true;
      expect_punct(";");
    }
    expect_punct(";");
    expect_punct("}");
    optional_semicolon();

    for (std::size_t x = 0; x < in_count; ++x) {
      if (!set[x]) {
        diags_.push_back({Diagnostic::Severity::Error, loc,
                          "fn '" + decl.name + "': table is missing input " +
                              describe_tuple(decl.fn.iface.inputs, x)});
      }
    }
    model_.fns.push_back(std::move(decl));
  }

  void linfn_decl() {
    const SourceLoc loc = peek().loc;
    expect_keyword("linfn");
    LinFnDecl decl;
    decl.loc = loc;
    decl.name = expect_ident("a function name");
    check_unique("behavior", decl.name, model_.find_behavior(decl.name).has_value(), loc);
    expect_keyword("for");
    const SourceLoc bat = peek().loc;
    decl.box = expect_ident("a box name");
    const BoxDecl& box = resolve_box(decl.box, bat);

    expect_punct("{");
    expect_keyword("C");
    expect_punct("=");
    const Eigen::MatrixXd H = parse_matrix();
    expect_punct(";");
    expect_punct("}");
    optional_semicolon();

    try {
      decl.system = behavior::embed_linear(box.iface, H);
      decl.system.iface.name = decl.name;
    } catch (const Error& e) {
      throw ParseError{loc, e.what()};
    }
    model_.linfns.push_back(std::move(decl));
  }

  contracts::PortSubset parse_port_subset(const wd::PortType& t) {
    const SourceLoc at = peek().loc;
    if (accept_keyword("full")) return contracts::PortSubset::full_for(t);
    if (peek().kind == Token::Kind::Punct && peek().text == "{") {
      if (!wd::is_finite(t)) throw ParseError{at, "label subset on a non-finite port"};
      expect_punct("{");
      std::set<std::size_t> labels;
      if (!accept_punct("}")) {
        do {
          labels.insert(resolve_finite_label(t, expect_label(), at));
        } while (accept_punct(","));
        expect_punct("}");
      }
      return contracts::PortSubset::of_labels(std::move(labels));
    }
    if (!wd::is_linear(t) || wd::dimension(t) != 1) {
      throw ParseError{at, "interval subsets require a one-dimensional linear port"};
    }
    std::vector<std::pair<double, double>> parts;
    do {
      expect_punct("[");
      const double lo = expect_number();
      expect_punct(",");
      const double hi = expect_number();
      expect_punct("]");
      parts.push_back({lo, hi});
    } while (accept_punct("u"));
    return contracts::PortSubset::of_intervals({contracts::IntervalSet::united(parts)});
  }

  void contract_decl() {
    const SourceLoc loc = peek().loc;
    expect_keyword("contract");
    ContractDecl decl;
    decl.loc = loc;
    decl.name = expect_ident("a contract name");
    check_unique("contract", decl.name, model_.find_contract(decl.name) != nullptr, loc);
    expect_keyword("for");
    const SourceLoc bat = peek().loc;
    decl.box = expect_ident("a box name");
    const BoxDecl& box = resolve_box(decl.box, bat);
    expect_punct("=");

    if (accept_keyword("rel")) {
      contracts::FiniteRelation r;
      r.iface = box.iface;
      expect_punct("{");
      if (!accept_punct("}")) {
        do {
          expect_punct("(");
          std::vector<std::string> in_labels;
          if (!(peek().kind == Token::Kind::Punct && peek().text == ";")) {
            do {
              in_labels.push_back(expect_label());
            } while (accept_punct(","));
          }
          expect_punct(";");
          std::vector<std::string> out_labels;
          if (!(peek().kind == Token::Kind::Punct && peek().text == ")")) {
            do {
              out_labels.push_back(expect_label());
            } while (accept_punct(","));
          }
          expect_punct(")");
          const SourceLoc at = peek().loc;
          if (in_labels.size() != box.iface.inputs.size() ||
              out_labels.size() != box.iface.outputs.size()) {
            throw ParseError{at, "relation tuple arity does not match the box"};
          }
          wd::Tuple in, out;
          for (std::size_t p = 0; p < in_labels.size(); ++p) {
            in.push_back(resolve_finite_label(box.iface.inputs[p], in_labels[p], at));
          }
          for (std::size_t p = 0; p < out_labels.size(); ++p) {
            out.push_back(resolve_finite_label(box.iface.outputs[p], out_labels[p], at));
          }
          r.pairs.insert({in, out});
        } while (accept_punct(","));
        expect_punct("}");
      }
      decl.contract = contracts::StaticContract{std::move(r)};
    } else if (accept_keyword("indep")) {
      contracts::IndependentContract c;
      c.iface = box.iface;
      for (const wd::PortType& t : box.iface.inputs) {
        c.inputs.push_back(contracts::PortSubset::full_for(t));
      }
      for (const wd::PortType& t : box.iface.outputs) {
        c.outputs.push_back(contracts::PortSubset::full_for(t));
      }
      expect_punct("{");
      while (!accept_punct("}")) {
        const SourceLoc at = peek().loc;
        const std::string side = expect_ident("'in' or 'out'");
        const std::size_t k = expect_index();
        expect_punct(":");
        if (side == "in") {
          if (k >= c.inputs.size()) throw ParseError{at, "input port index out of range"};
          c.inputs[k] = parse_port_subset(box.iface.inputs[k]);
        } else if (side == "out") {
          if (k >= c.outputs.size()) throw ParseError{at, "output port index out of range"};
          c.outputs[k] = parse_port_subset(box.iface.outputs[k]);
        } else {
          throw ParseError{at, "expected 'in' or 'out'"};
        }
        expect_punct(";");
      }
      decl.contract = contracts::StaticContract{std::move(c)};
    } else {
      fail("expected 'rel' or 'indep'");
    }
    optional_semicolon();
    model_.contracts.push_back(std::move(decl));
  }

  void timecontract_decl() {
    const SourceLoc loc = peek().loc;
    expect_keyword("timecontract");
    TimeContractDecl decl;
    decl.loc = loc;
    decl.name = expect_ident("a time contract name");
    for (const auto& tc : model_.timecontracts) {
      check_unique("timecontract", decl.name, tc.name == decl.name, loc);
    }
    expect_keyword("for");
    const SourceLoc bat = peek().loc;
    decl.box = expect_ident("a box name");
    resolve_box(decl.box, bat);
    expect_punct("=");

    if (accept_keyword("lift")) {
      decl.kind = TimeContractDecl::Kind::Lift;
      expect_punct("(");
      decl.lifted_contract = expect_ident("a contract name");
      expect_punct(")");
    } else if (accept_keyword("window")) {
      decl.kind = TimeContractDecl::Kind::Window;
      expect_punct("(");
      expect_keyword("assume");
      expect_punct("=");
      expect_keyword("in");
      if (expect_index() != 0) throw ParseError{loc, "window contracts use in[0]"};
      expect_keyword("in");
      decl.assume = parse_interval_union();
      expect_punct(",");
      expect_keyword("guarantee");
      expect_punct("=");
      expect_keyword("out");
      if (expect_index() != 0) throw ParseError{loc, "window contracts use out[0]"};
      expect_keyword("in");
      decl.guarantee = parse_interval_union();
      expect_punct(",");
      expect_keyword("delay");
      expect_punct("=");
      decl.delay = expect_count("a delay");
      if (accept_punct(",")) {
        expect_keyword("samples");
        expect_punct("=");
        expect_punct("[");
        do {
          decl.samples.push_back(expect_number());
        } while (accept_punct(","));
        expect_punct("]");
      }
      expect_punct(")");
    } else if (accept_keyword("implies")) {
      decl.kind = TimeContractDecl::Kind::Implies;
      expect_punct("(");
      expect_keyword("pattern");
      expect_punct("=");
      expect_punct("[");
      do {
        decl.pattern.push_back(expect_label());
      } while (accept_punct(","));
      expect_punct("]");
      expect_punct(",");
      expect_keyword("response");
      expect_punct("=");
      decl.response = expect_label();
      expect_punct(",");
      expect_keyword("within");
      expect_punct("=");
      decl.within = expect_count("a window size");
      expect_punct(")");
    } else if (accept_keyword("table")) {
      decl.kind = TimeContractDecl::Kind::Table;
      expect_punct("(");
      expect_keyword("horizon");
      expect_punct("=");
      decl.horizon = expect_count("a horizon");
      expect_punct(")");
      expect_punct("{");
      while (!accept_punct("}")) {
        expect_punct("(");
        std::vector<std::string> in_word, out_word;
        do {
          in_word.push_back(expect_label());
        } while (accept_punct(","));
        expect_punct(";");
        do {
          out_word.push_back(expect_label());
        } while (accept_punct(","));
        expect_punct(")");
        decl.rows.push_back({std::move(in_word), std::move(out_word)});
        expect_punct(";");
      }
    } else {
      fail("expected 'lift', 'window', 'implies', or 'table'");
    }
    optional_semicolon();
    model_.timecontracts.push_back(std::move(decl));
  }

  contracts::IntervalSet parse_interval_union() {
    std::vector<std::pair<double, double>> parts;
    do {
      expect_punct("[");
      const double lo = expect_number();
      expect_punct(",");
      const double hi = expect_number();
      expect_punct("]");
      parts.push_back({lo, hi});
    } while (accept_punct("u"));
    return contracts::IntervalSet::united(parts);
  }

  void test_decl() {
    const SourceLoc loc = peek().loc;
    expect_keyword("test");
    TestDecl decl;
    decl.loc = loc;
    decl.name = expect_ident("a test name");
    check_unique("test", decl.name, model_.find_test(decl.name) != nullptr, loc);
    expect_keyword("for");
    const SourceLoc bat = peek().loc;
    decl.box = expect_ident("a box name");
    resolve_box(decl.box, bat);
    expect_punct("=");

    if (accept_keyword("terminal")) {
      decl.kind = TestDecl::Kind::Terminal;
    } else if (accept_keyword("trace")) {
      decl.kind = TestDecl::Kind::Trace;
      expect_punct("(");
      if (accept_keyword("init")) {
        expect_punct("=");
        decl.trace_init = expect_label();
        expect_punct(",");
      }
      expect_keyword("inputs");
      expect_punct("=");
      expect_punct("[");
      if (!accept_punct("]")) {
        do {
          expect_punct("(");
          std::vector<std::string> labels;
          if (!accept_punct(")")) {
            do {
              labels.push_back(expect_label());
            } while (accept_punct(","));
            expect_punct(")");
          }
          decl.trace_inputs.push_back(std::move(labels));
        } while (accept_punct(","));
        expect_punct("]");
      }
      expect_punct(")");
    } else if (accept_keyword("iotable")) {
      decl.kind = TestDecl::Kind::IoTable;
      expect_punct("(");
      expect_keyword("horizon");
      expect_punct("=");
      decl.horizon = expect_count("a horizon");
      expect_punct(")");
    } else {
      fail("expected 'terminal', 'trace', or 'iotable'");
    }
    optional_semicolon();
    model_.tests.push_back(std::move(decl));
  }

  void kb_decl() {
    const SourceLoc loc = peek().loc;
    expect_keyword("kb");
    KbDecl decl;
    decl.loc = loc;
    decl.name = expect_ident("a knowledge base name");
    check_unique("kb", decl.name, model_.find_kb(decl.name) != nullptr, loc);
    expect_keyword("for");
    const SourceLoc bat = peek().loc;
    decl.box = expect_ident("a box name");
    resolve_box(decl.box, bat);
    expect_punct("{");
    if (!accept_punct("}")) {
      do {
        decl.entries.push_back(expect_ident("a behavior name"));
      } while (accept_punct(","));
      expect_punct("}");
    }
    optional_semicolon();
    model_.kbs.push_back(std::move(decl));
  }

  void attack_decl() {
    const SourceLoc loc = peek().loc;
    expect_keyword("attack");
    AttackDecl decl;
    decl.loc = loc;
    decl.name = expect_ident("an attack name");
    check_unique("attack", decl.name, model_.find_attack(decl.name) != nullptr, loc);
    expect_keyword("on");
    const SourceLoc wat = peek().loc;
    decl.wiring = expect_ident("a wiring name");
    if (model_.find_wiring(decl.wiring) == nullptr) {
      throw ParseError{wat, "unknown wiring '" + decl.wiring + "'"};
    }
    expect_punct("{");
    while (!accept_punct("}")) {
      if (accept_keyword("base")) {
        do {
          decl.base.push_back(expect_ident("a behavior name"));
        } while (accept_punct(","));
        expect_punct(";");
      } else if (accept_keyword("rewrite")) {
        const std::string box = expect_ident("an inner box name");
        expect_keyword("with");
        const std::string beh = expect_ident("a behavior name");
        decl.rewrites.push_back({box, beh});
        expect_punct(";");
      } else if (accept_keyword("rewire")) {
        expect_punct("{");
        while (!accept_punct("}")) {
          AttackDecl::Rewire rw;
          rw.box = expect_ident("an inner box name");
          expect_punct(".");
          expect_keyword("in");
          rw.port = expect_index();
          expect_punct("<-");
          if (accept_keyword("const")) {
            rw.const_label = expect_label();
          } else {
            const std::string head = expect_ident("a source");
            expect_punct(".");
            const std::string side = expect_ident("'in' or 'out'");
            const std::size_t k = expect_index();
            if (head == "outer") {
              if (side != "in") fail("outer outputs cannot be sources");
              rw.from_outer = k;
            } else {
              if (side != "out") fail("only output ports can act as sources");
              rw.from_box = {head, k};
            }
          }
          decl.rewires.push_back(std::move(rw));
          expect_punct(";");
        }
        expect_punct(";");
      } else {
        fail("expected 'base', 'rewrite', or 'rewire'");
      }
    }
    optional_semicolon();
    model_.attacks.push_back(std::move(decl));
  }

  static std::string describe_tuple(const std::vector<wd::PortType>& ports,
                                    std::size_t index) {
    const wd::Tuple t = wd::index_to_tuple(ports, index);
    std::string s = "(";
    for (std::size_t p = 0; p < t.size(); ++p) {
      if (p) s += ", ";
      s += std::get<wd::FiniteSet>(ports[p]).labels[t[p]];
    }
    return s + ")";
  }
};

}  // namespace

std::string to_string(const Diagnostic& d) {
  const char* sev = d.severity == Diagnostic::Severity::Error ? "error" : "warning";
  return std::to_string(d.loc.line) + ":" + std::to_string(d.loc.col) + ": " + sev +
         ": " + d.message;
}

const TypeDecl* Model::find_type(const std::string& name) const {
  for (const auto& t : types) {
    if (t.name == name) return &t;
  }
  return nullptr;
}
const BoxDecl* Model::find_box(const std::string& name) const {
  for (const auto& b : boxes) {
    if (b.name == name) return &b;
  }
  return nullptr;
}
const WiringDecl* Model::find_wiring(const std::string& name) const {
  for (const auto& w : wirings) {
    if (w.name == name) return &w;
  }
  return nullptr;
}
const ContractDecl* Model::find_contract(const std::string& name) const {
  for (const auto& c : contracts) {
    if (c.name == name) return &c;
  }
  return nullptr;
}
const TestDecl* Model::find_test(const std::string& name) const {
  for (const auto& t : tests) {
    if (t.name == name) return &t;
  }
  return nullptr;
}
const KbDecl* Model::find_kb(const std::string& name) const {
  for (const auto& k : kbs) {
    if (k.name == name) return &k;
  }
  return nullptr;
}
const AttackDecl* Model::find_attack(const std::string& name) const {
  for (const auto& a : attacks) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

std::optional<security::Behavior> Model::find_behavior(const std::string& name) const {
  for (const auto& m : moores) {
    if (m.name == name) return security::Behavior{m.machine};
  }
  for (const auto& l : ltis) {
    if (l.name == name) return security::Behavior{l.system};
  }
  for (const auto& f : fns) {
    if (f.name == name) return security::Behavior{behavior::embed_function(f.fn)};
  }
  for (const auto& f : linfns) {
    if (f.name == name) return security::Behavior{f.system};
  }
  return std::nullopt;
}

std::optional<std::string> Model::behavior_box(const std::string& name) const {
  for (const auto& m : moores) {
    if (m.name == name) return m.box;
  }
  for (const auto& l : ltis) {
    if (l.name == name) return l.box;
  }
  for (const auto& f : fns) {
    if (f.name == name) return f.box;
  }
  for (const auto& f : linfns) {
    if (f.name == name) return f.box;
  }
  return std::nullopt;
}

ParseResult parse_model(std::string_view text) {
  ParseResult result;
  std::vector<Token> tokens = lex(text, result.diagnostics);
  Parser parser(std::move(tokens), result.diagnostics);
  result.model = parser.run();
  return result;
}

}  // namespace wiredsys::dsl
