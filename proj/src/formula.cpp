#include "deflat/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <optional>
#include <set>

namespace deflat {

struct Formula::Node {
  Op op = Op::True;
  std::string a, b;
  std::int64_t k = 0;
  Formula l, r;
};

// A null node is the constant true.
Formula::Formula() = default;

Formula Formula::truth() { return Formula(); }

Formula Formula::falsity() {
  static const auto n = [] {
    auto node = std::make_shared<Node>();
    node->op = Op::False;
    return std::shared_ptr<const Node>(node);
  }();
  return Formula(n);
}

Formula Formula::constant(bool value) { return value ? truth() : falsity(); }

Formula Formula::less(std::string a, std::string b) {
  auto n = std::make_shared<Node>();
  n->op = Op::Less;
  n->a = std::move(a);
  n->b = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::eq(std::string a, std::string b, std::int64_t offset) {
  auto n = std::make_shared<Node>();
  n->op = Op::Eq;
  n->a = std::move(a);
  n->b = std::move(b);
  n->k = offset;
  return Formula(std::move(n));
}

Formula Formula::negate(Formula f) {
  auto n = std::make_shared<Node>();
  n->op = Op::Not;
  n->l = std::move(f);
  return Formula(std::move(n));
}

Formula Formula::conj(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->op = Op::And;
  n->l = std::move(l);
  n->r = std::move(r);
  return Formula(std::move(n));
}

Formula Formula::disj(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->op = Op::Or;
  n->l = std::move(l);
  n->r = std::move(r);
  return Formula(std::move(n));
}

Formula Formula::implies(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->op = Op::Implies;
  n->l = std::move(l);
  n->r = std::move(r);
  return Formula(std::move(n));
}

Formula Formula::exists(std::string var, Formula body) {
  auto n = std::make_shared<Node>();
  n->op = Op::Exists;
  n->a = std::move(var);
  n->l = std::move(body);
  return Formula(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
  auto n = std::make_shared<Node>();
  n->op = Op::Forall;
  n->a = std::move(var);
  n->l = std::move(body);
  return Formula(std::move(n));
}

Op Formula::op() const { return node_ ? node_->op : Op::True; }

const std::string& Formula::lhs() const {
  static const std::string empty;
  return node_ ? node_->a : empty;
}

const std::string& Formula::rhs() const {
  static const std::string empty;
  return node_ ? node_->b : empty;
}

std::int64_t Formula::offset() const { return node_ ? node_->k : 0; }

const Formula& Formula::left() const {
  switch (op()) {
    case Op::Not:
    case Op::And:
    case Op::Or:
    case Op::Implies: return node_->l;
    default: throw std::logic_error("Formula::left on a node without children");
  }
}

const Formula& Formula::right() const {
  switch (op()) {
    case Op::And:
    case Op::Or:
    case Op::Implies: return node_->r;
    default: throw std::logic_error("Formula::right on a non-binary node");
  }
}

const Formula& Formula::body() const {
  if (!is_quantifier()) throw std::logic_error("Formula::body on a non-quantifier");
  return node_->l;
}

bool Formula::quantifier_free() const {
  switch (op()) {
    case Op::Exists:
    case Op::Forall: return false;
    case Op::Not: return left().quantifier_free();
    case Op::And:
    case Op::Or:
    case Op::Implies: return left().quantifier_free() && right().quantifier_free();
    default: return true;
  }
}

bool operator==(const Formula& x, const Formula& y) {
  if (x.node_ == y.node_) return true;
  if (x.op() != y.op()) return false;
  switch (x.op()) {
    case Op::True:
    case Op::False: return true;
    case Op::Less: return x.lhs() == y.lhs() && x.rhs() == y.rhs();
    case Op::Eq: return x.lhs() == y.lhs() && x.rhs() == y.rhs() && x.offset() == y.offset();
    case Op::Not: return x.left() == y.left();
    case Op::And:
    case Op::Or:
    case Op::Implies: return x.left() == y.left() && x.right() == y.right();
    case Op::Exists:
    case Op::Forall: return x.var() == y.var() && x.body() == y.body();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, Int, Bang, Amp, Bar, Arrow, LParen, RParen, Dot, Less, Equals, Plus, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::Ident, start, std::string(s.substr(start, i - start))});
      continue;
    }
    if (digit(c) || (c == '-' && i + 1 < s.size() && digit(s[i + 1]))) {
      ++i;
      while (i < s.size() && digit(s[i])) ++i;
      out.push_back({Tok::Int, start, std::string(s.substr(start, i - start))});
      continue;
    }
    switch (c) {
      case '!': out.push_back({Tok::Bang, start, "!"}); break;
      case '&': out.push_back({Tok::Amp, start, "&"}); break;
      case '|': out.push_back({Tok::Bar, start, "|"}); break;
      case '(': out.push_back({Tok::LParen, start, "("}); break;
      case ')': out.push_back({Tok::RParen, start, ")"}); break;
      case '.': out.push_back({Tok::Dot, start, "."}); break;
      case '<': out.push_back({Tok::Less, start, "<"}); break;
      case '=': out.push_back({Tok::Equals, start, "="}); break;
      case '+': out.push_back({Tok::Plus, start, "+"}); break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Tok::Arrow, start, "->"});
          ++i;
          break;
        }
        [[fallthrough]];
      default: throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    ++i;
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, Signature sig) : toks_(tokenize(text)), sig_(sig) {}

  Formula run() {
    Formula f = implication();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }

  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      fail(std::string("expected ") + what +
           (peek().kind == Tok::End ? " but input ended" : ", found '" + peek().text + "'"));
    }
    return take();
  }

  // Right associative, lowest precedence.
  Formula implication() {
    Formula l = disjunction();
    if (peek().kind == Tok::Arrow) {
      take();
      return Formula::implies(std::move(l), implication());
    }
    return l;
  }

  Formula disjunction() {
    Formula l = conjunction();
    while (peek().kind == Tok::Bar) {
      take();
      l = Formula::disj(std::move(l), conjunction());
    }
    return l;
  }

  Formula conjunction() {
    Formula l = unary();
    while (peek().kind == Tok::Amp) {
      take();
      l = Formula::conj(std::move(l), unary());
    }
    return l;
  }

  bool at_quantifier() const {
    const Token& t = peek();
    return t.kind == Tok::Ident && (t.text == "E" || t.text == "A") &&
           peek(1).kind == Tok::Ident && peek(2).kind == Tok::Dot;
  }

  Formula unary() {
    if (peek().kind == Tok::Bang) {
      take();
      return Formula::negate(unary());
    }
    if (at_quantifier()) {
      bool ex = take().text == "E";
      std::string v = take().text;
      check_var(v, toks_[pos_ - 1].pos);
      take();  // '.'
      Formula body = implication();
      return ex ? Formula::exists(std::move(v), std::move(body))
                : Formula::forall(std::move(v), std::move(body));
    }
    return primary();
  }

  void check_var(const std::string& v, std::size_t at) const {
    if (v == "true" || v == "false") throw ParseError("'" + v + "' is not a variable", at);
  }

  Formula primary() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      take();
      Formula f = implication();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Ident && t.text == "true") {
      take();
      return Formula::truth();
    }
    if (t.kind == Tok::Ident && t.text == "false") {
      take();
      return Formula::falsity();
    }
    if (t.kind != Tok::Ident) fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    return atom();
  }

  Formula atom() {
    Token lhs = take();
    check_var(lhs.text, lhs.pos);
    const Token& rel = peek();
    if (rel.kind == Tok::Less) {
      if (sig_ == Signature::ZSucc) fail("'<' is not part of the successor signature");
      take();
      Token rhs = expect(Tok::Ident, "a variable");
      check_var(rhs.text, rhs.pos);
      if (peek().kind == Tok::Plus) fail("offsets are not part of the order signature");
      return Formula::less(lhs.text, rhs.text);
    }
    if (rel.kind != Tok::Equals) fail("expected '<' or '=' after variable '" + lhs.text + "'");
    take();
    Token rhs = expect(Tok::Ident, "a variable");
    check_var(rhs.text, rhs.pos);
    std::int64_t k = 0;
    if (peek().kind == Tok::Plus) {
      if (sig_ == Signature::QOrder) fail("offsets are not part of the order signature");
      take();
      Token num = expect(Tok::Int, "an integer offset");
      auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), k);
      if (ec != std::errc() || ptr != num.text.data() + num.text.size())
        throw ParseError("offset out of range", num.pos);
    }
    return Formula::eq(lhs.text, rhs.text, k);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Signature sig_;
};

}  // namespace

Formula parse(std::string_view text, Signature sig) { return Parser(text, sig).run(); }

// ---------------------------------------------------------------------------
// Rendering

namespace {

void render_into(const Formula& f, std::string& out);

void render_operand(const Formula& f, std::string& out) {
  bool simple = f.is_atom() || f.is_constant() || f.op() == Op::Not;
  if (!simple) out += '(';
  render_into(f, out);
  if (!simple) out += ')';
}

void render_into(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Less: out += f.lhs() + " < " + f.rhs(); return;
    case Op::Eq:
      out += f.lhs() + " = " + f.rhs();
      if (f.offset() != 0) out += " + " + std::to_string(f.offset());
      return;
    case Op::Not:
      out += "!(";
      render_into(f.left(), out);
      out += ')';
      return;
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      render_operand(f.left(), out);
      out += f.op() == Op::And ? " & " : f.op() == Op::Or ? " | " : " -> ";
      render_operand(f.right(), out);
      return;
    }
    case Op::Exists:
    case Op::Forall:
      out += f.op() == Op::Exists ? "E " : "A ";
      out += f.var() + ". (";
      render_into(f.body(), out);
      out += ')';
      return;
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Queries

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound, VarOrder& out) {
  auto note = [&](const std::string& v) {
    if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  switch (f.op()) {
    case Op::True:
    case Op::False: return;
    case Op::Less:
    case Op::Eq:
      note(f.lhs());
      note(f.rhs());
      return;
    case Op::Not: collect_free(f.left(), bound, out); return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      collect_free(f.left(), bound, out);
      collect_free(f.right(), bound, out);
      return;
    case Op::Exists:
    case Op::Forall:
      bound.push_back(f.var());
      collect_free(f.body(), bound, out);
      bound.pop_back();
      return;
  }
}

}  // namespace

VarOrder free_vars(const Formula& f) {
  std::vector<std::string> bound;
  VarOrder out;
  collect_free(f, bound, out);
  return out;
}

std::int64_t max_abs_offset(const Formula& f) {
  switch (f.op()) {
    case Op::Eq: {
      std::int64_t k = f.offset();
      if (k == std::numeric_limits<std::int64_t>::min()) return std::numeric_limits<std::int64_t>::max();
      return k < 0 ? -k : k;
    }
    case Op::Not: return max_abs_offset(f.left());
    case Op::And:
    case Op::Or:
    case Op::Implies: return std::max(max_abs_offset(f.left()), max_abs_offset(f.right()));
    case Op::Exists:
    case Op::Forall: return max_abs_offset(f.body());
    default: return 0;
  }
}

std::size_t quantifier_count(const Formula& f) {
  switch (f.op()) {
    case Op::Not: return quantifier_count(f.left());
    case Op::And:
    case Op::Or:
    case Op::Implies: return quantifier_count(f.left()) + quantifier_count(f.right());
    case Op::Exists:
    case Op::Forall: return 1 + quantifier_count(f.body());
    default: return 0;
  }
}

std::size_t quantifier_depth(const Formula& f) {
  switch (f.op()) {
    case Op::Not: return quantifier_depth(f.left());
    case Op::And:
    case Op::Or:
    case Op::Implies: return std::max(quantifier_depth(f.left()), quantifier_depth(f.right()));
    case Op::Exists:
    case Op::Forall: return 1 + quantifier_depth(f.body());
    default: return 0;
  }
}

void check_signature(const Formula& f, Signature sig) {
  switch (f.op()) {
    case Op::Less:
      if (sig == Signature::ZSucc)
        throw std::invalid_argument("atom '" + render(f) + "' is not in the successor signature");
      return;
    case Op::Eq:
      if (sig == Signature::QOrder && f.offset() != 0)
        throw std::invalid_argument("atom '" + render(f) + "' is not in the order signature");
      return;
    case Op::Not: check_signature(f.left(), sig); return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      check_signature(f.left(), sig);
      check_signature(f.right(), sig);
      return;
    case Op::Exists:
    case Op::Forall: check_signature(f.body(), sig); return;
    default: return;
  }
}

// ---------------------------------------------------------------------------
// Normal forms

Formula not_of(const Formula& f) {
  if (f.op() == Op::True) return Formula::falsity();
  if (f.op() == Op::False) return Formula::truth();
  if (f.op() == Op::Not) return f.left();
  return Formula::negate(f);
}

Formula and_of(const std::vector<Formula>& parts) {
  std::optional<Formula> acc;
  for (const auto& p : parts) {
    if (p.op() == Op::False) return Formula::falsity();
    if (p.op() == Op::True) continue;
    acc = acc ? Formula::conj(*acc, p) : p;
  }
  return acc ? *acc : Formula::truth();
}

Formula or_of(const std::vector<Formula>& parts) {
  std::optional<Formula> acc;
  for (const auto& p : parts) {
    if (p.op() == Op::True) return Formula::truth();
    if (p.op() == Op::False) continue;
    acc = acc ? Formula::disj(*acc, p) : p;
  }
  return acc ? *acc : Formula::falsity();
}

Formula simplify(const Formula& f) {
  switch (f.op()) {
    case Op::Less:
      if (f.lhs() == f.rhs()) return Formula::falsity();
      return f;
    case Op::Eq:
      if (f.lhs() == f.rhs()) return Formula::constant(f.offset() == 0);
      return f;
    case Op::Not: return not_of(simplify(f.left()));
    case Op::And: return and_of({simplify(f.left()), simplify(f.right())});
    case Op::Or: return or_of({simplify(f.left()), simplify(f.right())});
    case Op::Implies: return or_of({not_of(simplify(f.left())), simplify(f.right())});
    case Op::Exists:
    case Op::Forall: {
      Formula b = simplify(f.body());
      if (b.is_constant()) return b;
      return f.op() == Op::Exists ? Formula::exists(f.var(), b) : Formula::forall(f.var(), b);
    }
    default: return f;
  }
}

namespace {

Formula nnf_impl(const Formula& f, bool neg) {
  switch (f.op()) {
    case Op::True:
    case Op::False: return Formula::constant((f.op() == Op::True) != neg);
    case Op::Less:
    case Op::Eq: return neg ? Formula::negate(f) : f;
    case Op::Not: return nnf_impl(f.left(), !neg);
    case Op::And:
    case Op::Or: {
      Formula l = nnf_impl(f.left(), neg);
      Formula r = nnf_impl(f.right(), neg);
      bool as_and = (f.op() == Op::And) != neg;
      return as_and ? Formula::conj(std::move(l), std::move(r)) : Formula::disj(std::move(l), std::move(r));
    }
    case Op::Implies: {
      // a -> b  ==  !a | b
      Formula l = nnf_impl(f.left(), !neg);
      Formula r = nnf_impl(f.right(), neg);
      return neg ? Formula::conj(std::move(l), std::move(r)) : Formula::disj(std::move(l), std::move(r));
    }
    case Op::Exists:
    case Op::Forall: {
      bool as_exists = (f.op() == Op::Exists) != neg;
      Formula b = nnf_impl(f.body(), neg);
      return as_exists ? Formula::exists(f.var(), std::move(b)) : Formula::forall(f.var(), std::move(b));
    }
  }
  return f;
}

void push_unique(Conjunct& c, const Literal& lit) {
  if (std::find(c.begin(), c.end(), lit) == c.end()) c.push_back(lit);
}

bool contradictory(const Conjunct& c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (c[i].positive != c[j].positive && c[i].atom == c[j].atom) return true;
  return false;
}

Dnf dnf_impl(const Formula& f) {
  switch (f.op()) {
    case Op::True: return Dnf{Conjunct{}};
    case Op::False: return Dnf{};
    case Op::Less:
    case Op::Eq: return Dnf{Conjunct{Literal{f, true}}};
    case Op::Not:
      if (!f.left().is_atom()) throw std::invalid_argument("to_dnf: input is not in negation normal form");
      return Dnf{Conjunct{Literal{f.left(), false}}};
    case Op::Or: {
      Dnf l = dnf_impl(f.left());
      Dnf r = dnf_impl(f.right());
      for (auto& c : r)
        if (std::find(l.begin(), l.end(), c) == l.end()) l.push_back(std::move(c));
      return l;
    }
    case Op::And: {
      Dnf l = dnf_impl(f.left());
      Dnf r = dnf_impl(f.right());
      Dnf out;
      for (const auto& a : l) {
        for (const auto& b : r) {
          Conjunct c = a;
          for (const auto& lit : b) push_unique(c, lit);
          if (contradictory(c)) continue;
          if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
        }
      }
      return out;
    }
    default: throw std::invalid_argument("to_dnf: input is not quantifier-free");
  }
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_impl(f, false); }

Dnf to_dnf(const Formula& quantifier_free) { return dnf_impl(nnf(quantifier_free)); }

Formula from_dnf(const Dnf& d) {
  std::vector<Formula> disjuncts;
  disjuncts.reserve(d.size());
  for (const auto& c : d) {
    std::vector<Formula> lits;
    lits.reserve(c.size());
    for (const auto& l : c) lits.push_back(l.to_formula());
    disjuncts.push_back(and_of(lits));
  }
  return or_of(disjuncts);
}

std::size_t index_of(const VarOrder& vars, const std::string& name) {
  auto it = std::find(vars.begin(), vars.end(), name);
  if (it == vars.end()) throw std::invalid_argument("variable '" + name + "' is not in the argument list");
  return static_cast<std::size_t>(it - vars.begin());
}

VarOrder parse_var_order(std::string_view text) {
  VarOrder out;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find(',', i);
    if (j == std::string_view::npos) j = text.size();
    std::string_view item = text.substr(i, j - i);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (item.empty()) {
      if (j == text.size() && out.empty() && i == 0) break;
      throw std::invalid_argument("empty variable name in list");
    }
    if (!ident_start(item.front()) || !std::all_of(item.begin(), item.end(), ident_char))
      throw std::invalid_argument("bad variable name '" + std::string(item) + "'");
    std::string name(item);
    if (std::find(out.begin(), out.end(), name) != out.end())
      throw std::invalid_argument("duplicate variable '" + name + "'");
    out.push_back(std::move(name));
    i = j + 1;
  }
  return out;
}

}  // namespace deflat
