#ifndef JETS_PARSER_HPP
#define JETS_PARSER_HPP

// Reader for the `.pde` text format:
//
//   file   := header stmt*
//   header := "independent" ident+ ";" "dependent" ident+ ";" ["order" nat ";"]
//   stmt   := "eq" expr "=" expr ";"
//   expr   := term (("+" | "-") term)*
//   term   := factor ("*" factor)*
//   factor := atom ["^" nat] | "-" factor
//   atom   := rational | ident | jet | "(" expr ")"
//   jet    := "d" "(" ident ("," ident)+ ")" | ident "_" letters
//
// `#` starts a comment running to the end of the line. The `u_xy` shorthand
// is only accepted when every independent name is a single character.

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <jets/diffpoly.hpp>
#include <jets/error.hpp>
#include <jets/jetcore.hpp>
#include <jets/system.hpp>

namespace jets {

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Parsed system together with its source text and, per canonical equation,
/// the location of the statement that produced it.
struct SystemDocument {
  std::string text;
  DiffSystem system;
  std::vector<SourceLocation> locations;
};

namespace detail {

struct Token {
  enum class Kind { ident, number, symbol, end };
  Kind kind = Kind::end;
  std::string text;
  SourceLocation loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      SourceLocation loc{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Token::Kind::end, "", loc});
        return out;
      }
      const unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (std::isalpha(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) advance();
        out.push_back({Token::Kind::ident, std::string(src_.substr(start, pos_ - start)), loc});
      } else if (std::isdigit(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        if (pos_ < src_.size() && src_[pos_] == '.') {
          throw ParseError(line_, col_, "decimal numbers are not accepted; write rationals as p/q");
        }
        out.push_back({Token::Kind::number, std::string(src_.substr(start, pos_ - start)), loc});
      } else if (std::string_view(";=+-*^(),_/").find(static_cast<char>(c)) != std::string_view::npos) {
        advance();
        out.push_back({Token::Kind::symbol, std::string(1, static_cast<char>(c)), loc});
      } else {
        std::string shown = std::isprint(c) ? std::string(1, static_cast<char>(c)) : "\\x" + hex(c);
        throw ParseError(line_, col_, "unexpected character '" + shown + "'");
      }
    }
  }

 private:
  static std::string hex(unsigned char c) {
    const char* digits = "0123456789abcdef";
    return {digits[c >> 4], digits[c & 15]};
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline const std::set<std::string, std::less<>>& reserved_words() {
  static const std::set<std::string, std::less<>> words{"independent", "dependent", "order", "eq", "d"};
  return words;
}

class Parser {
 public:
  static constexpr unsigned kMaxExponent = 64;
  static constexpr unsigned kMaxDepth = 200;

  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  void set_signature(BundleSignature sig) { sig_ = std::move(sig); }
  const BundleSignature& signature() const { return *sig_; }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_symbol(char c) const { return peek().kind == Token::Kind::symbol && peek().text[0] == c; }
  bool at_word(std::string_view w) const { return peek().kind == Token::Kind::ident && peek().text == w; }
  bool at_end() const { return peek().kind == Token::Kind::end; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.loc.line, t.loc.column, msg);
  }

  void expect_symbol(char c) {
    if (!at_symbol(c)) fail(peek(), std::string("expected '") + c + "'" + found());
    next();
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) fail(peek(), "expected '" + std::string(w) + "'" + found());
    next();
  }
  std::string found() const {
    if (at_end()) return " but reached end of input";
    return " but found '" + peek().text + "'";
  }

  std::vector<std::string> name_list() {
    std::vector<std::string> names;
    while (peek().kind == Token::Kind::ident) {
      if (reserved_words().count(peek().text)) fail(peek(), "'" + peek().text + "' is reserved");
      names.push_back(next().text);
    }
    return names;
  }

  unsigned natural(const char* what) {
    if (peek().kind != Token::Kind::number) fail(peek(), std::string("expected ") + what + found());
    const Token& t = next();
    if (t.text.size() > 9) fail(t, std::string(what) + " is too large");
    return static_cast<unsigned>(std::stoul(t.text));
  }

  Rational rational_literal() {
    const Token& num = next();
    Integer n(num.text, 10);
    Integer d = 1;
    if (at_symbol('/')) {
      next();
      if (peek().kind != Token::Kind::number) fail(peek(), "malformed rational: expected a denominator" + found());
      const Token& den = next();
      d = Integer(den.text, 10);
      if (d == 0) fail(den, "malformed rational: zero denominator");
    }
    Rational r(n, d);
    r.canonicalize();
    return r;
  }

  DiffPolynomial expr(unsigned depth) {
    guard_depth(depth);
    DiffPolynomial acc = term(depth + 1);
    while (at_symbol('+') || at_symbol('-')) {
      const bool minus = next().text[0] == '-';
      DiffPolynomial t = term(depth + 1);
      if (minus) {
        acc -= t;
      } else {
        acc += t;
      }
    }
    return acc;
  }

  DiffPolynomial term(unsigned depth) {
    guard_depth(depth);
    DiffPolynomial acc = factor(depth + 1);
    while (at_symbol('*')) {
      next();
      acc *= factor(depth + 1);
    }
    return acc;
  }

  DiffPolynomial factor(unsigned depth) {
    guard_depth(depth);
    if (at_symbol('-')) {
      next();
      return -factor(depth + 1);
    }
    DiffPolynomial base = atom(depth + 1);
    if (at_symbol('^')) {
      next();
      const Token& t = peek();
      unsigned e = natural("an exponent");
      if (e > kMaxExponent) fail(t, "exponent larger than " + std::to_string(kMaxExponent));
      base = base.pow(e);
    }
    return base;
  }

  DiffPolynomial atom(unsigned depth) {
    guard_depth(depth);
    const Token& t = peek();
    if (t.kind == Token::Kind::number) return rational_literal();
    if (at_symbol('(')) {
      next();
      DiffPolynomial e = expr(depth + 1);
      expect_symbol(')');
      return e;
    }
    if (t.kind != Token::Kind::ident) fail(t, "expected a number, variable or '('" + found());
    if (t.text == "d" && peek(1).kind == Token::Kind::symbol && peek(1).text == "(") return DiffPolynomial::jet(jet_call());
    next();
    if (auto pos = signature().independent_position(t.text); pos >= 0) {
      if (at_symbol('_')) fail(peek(), "subscripts apply to dependent variables, not to '" + t.text + "'");
      return DiffPolynomial::coordinate(static_cast<std::size_t>(pos));
    }
    auto dep = signature().dependent_position(t.text);
    if (dep < 0) fail(t, "unknown identifier '" + t.text + "'");
    MultiIndex J(signature().p());
    if (at_symbol('_')) {
      next();
      J = subscript();
    }
    return DiffPolynomial::jet(static_cast<std::size_t>(dep), std::move(J));
  }

  MultiIndex subscript() {
    const Token& t = peek();
    if (t.kind != Token::Kind::ident) fail(t, "expected derivative letters after '_'" + found());
    if (!signature().single_letter_coordinates()) {
      fail(t, "the u_xy shorthand needs single-letter independent names; use d(u, ...)");
    }
    next();
    MultiIndex J(signature().p());
    for (std::size_t k = 0; k < t.text.size(); ++k) {
      const std::string letter(1, t.text[k]);
      auto pos = signature().independent_position(letter);
      if (pos < 0) {
        SourceLocation at{t.loc.line, t.loc.column + k};
        if (signature().dependent_position(letter) >= 0) {
          throw ParseError(at.line, at.column, "subscript uses the dependent name '" + letter + "'");
        }
        throw ParseError(at.line, at.column, "unknown derivative letter '" + letter + "'");
      }
      J = J.increment(static_cast<std::size_t>(pos));
    }
    return J;
  }

  /// d(u, x, y, ...) with the derivative names in any order.
  JetVariable jet_call() {
    next();  // d
    expect_symbol('(');
    const Token& head = peek();
    if (head.kind != Token::Kind::ident) fail(head, "expected a dependent variable" + found());
    next();
    auto dep = signature().dependent_position(head.text);
    if (dep < 0) {
      if (signature().independent_position(head.text) >= 0) {
        fail(head, "'" + head.text + "' is independent; d(...) starts with a dependent variable");
      }
      fail(head, "unknown identifier '" + head.text + "'");
    }
    MultiIndex J(signature().p());
    if (!at_symbol(',')) fail(peek(), "expected ',' and a derivative variable" + found());
    while (at_symbol(',')) {
      next();
      const Token& v = peek();
      if (v.kind != Token::Kind::ident) fail(v, "expected an independent variable" + found());
      next();
      auto pos = signature().independent_position(v.text);
      if (pos < 0) {
        if (signature().dependent_position(v.text) >= 0) fail(v, "subscript uses the dependent name '" + v.text + "'");
        fail(v, "unknown identifier '" + v.text + "'");
      }
      J = J.increment(static_cast<std::size_t>(pos));
    }
    expect_symbol(')');
    return {static_cast<std::size_t>(dep), std::move(J)};
  }

 private:
  void guard_depth(unsigned depth) const {
    if (depth > kMaxDepth) fail(peek(), "expression nested too deeply");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::optional<BundleSignature> sig_;
};

}  // namespace detail

inline SystemDocument parse_document(std::string_view text) {
  detail::Parser ps(detail::Lexer(text).run());

  const detail::Token header = ps.peek();
  ps.expect_word("independent");
  auto independent = ps.name_list();
  if (independent.empty()) ps.fail(ps.peek(), "expected at least one independent variable" + ps.found());
  ps.expect_symbol(';');
  ps.expect_word("dependent");
  auto dependent = ps.name_list();
  if (dependent.empty()) ps.fail(ps.peek(), "expected at least one dependent variable" + ps.found());
  ps.expect_symbol(';');
  try {
    ps.set_signature(BundleSignature(std::move(independent), std::move(dependent)));
  } catch (const Error& e) {
    throw ParseError(header.loc.line, header.loc.column, e.what());
  }

  std::optional<std::pair<unsigned, detail::Token>> declared;
  if (ps.at_word("order")) {
    detail::Token t = ps.next();
    declared.emplace(ps.natural("an order"), t);
    ps.expect_symbol(';');
  }

  std::vector<std::pair<DiffPolynomial, SourceLocation>> parsed;
  while (!ps.at_end()) {
    const detail::Token start = ps.peek();
    ps.expect_word("eq");
    DiffPolynomial lhs = ps.expr(0);
    ps.expect_symbol('=');
    DiffPolynomial rhs = ps.expr(0);
    ps.expect_symbol(';');
    DiffPolynomial f = lhs - rhs;
    if (f.is_zero()) ps.fail(start, "equation is identically zero");
    parsed.emplace_back(std::move(f), start.loc);
  }
  if (parsed.empty()) ps.fail(ps.peek(), "a system needs at least one equation");

  unsigned order = 0;
  for (const auto& [f, loc] : parsed) order = std::max(order, f.order().value_or(0));
  if (declared) {
    if (declared->first < order) {
      ps.fail(declared->second, "declared order " + std::to_string(declared->first) +
                                    " is below the highest equation order " + std::to_string(order));
    }
    order = declared->first;
  }

  std::vector<DiffPolynomial> eqs;
  for (const auto& [f, loc] : parsed) eqs.push_back(f);
  DiffSystem sys = make_system(ps.signature(), eqs, order);
  std::vector<SourceLocation> locations;
  for (const auto& g : sys.equations()) {
    SourceLocation where;
    for (const auto& [f, loc] : parsed) {
      if (normalize_equation(f) == g) {
        where = loc;
        break;
      }
    }
    locations.push_back(where);
  }
  return {std::string(text), std::move(sys), std::move(locations)};
}

inline DiffSystem parse_system(std::string_view text) { return parse_document(text).system; }

/// A single expression over a known signature, e.g. "u_x - u".
inline DiffPolynomial parse_expression(std::string_view text, const BundleSignature& sig) {
  detail::Parser ps(detail::Lexer(text).run());
  ps.set_signature(sig);
  DiffPolynomial f = ps.expr(0);
  if (!ps.at_end()) ps.fail(ps.peek(), "unexpected trailing input" + ps.found());
  return f;
}

/// Comma- or semicolon-separated `target = value` pairs where each target is
/// an independent variable or a jet variable and each value a signed rational.
inline std::map<Generator, Rational> parse_assignments(std::string_view text, const BundleSignature& sig) {
  detail::Parser ps(detail::Lexer(text).run());
  ps.set_signature(sig);
  std::map<Generator, Rational> out;
  while (!ps.at_end()) {
    const detail::Token t = ps.peek();
    DiffPolynomial target = ps.atom(0);
    if (target.size() != 1 || target.leading_term().first.factors().size() != 1 ||
        target.leading_term().first.factors()[0].second != 1) {
      ps.fail(t, "expected a variable on the left of '='");
    }
    Generator g = target.leading_term().first.factors()[0].first;
    ps.expect_symbol('=');
    bool negative = false;
    if (ps.at_symbol('-')) {
      ps.next();
      negative = true;
    }
    if (ps.peek().kind != detail::Token::Kind::number) ps.fail(ps.peek(), "expected a rational value" + ps.found());
    Rational value = ps.rational_literal();
    if (negative) value = -value;
    if (!out.emplace(g, value).second) ps.fail(t, "variable assigned twice");
    if (ps.at_symbol(',') || ps.at_symbol(';')) {
      ps.next();
    } else if (!ps.at_end()) {
      ps.fail(ps.peek(), "expected ',' between assignments" + ps.found());
    }
  }
  return out;
}

}  // namespace jets

#endif  // JETS_PARSER_HPP
