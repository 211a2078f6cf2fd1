#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace deflat {

// The two structures: <Q, <> and <Z, successor>.
enum class Signature { QOrder, ZSucc };

enum class Op { True, False, Less, Eq, Not, And, Or, Implies, Exists, Forall };

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Immutable formula tree with shared subterms.
//
// Atoms: Less(a, b) is "a < b"; Eq(a, b, k) is "a = b + k". Over QOrder the
// offset k is always 0. Quantifier nodes store the bound variable in lhs().
class Formula {
 public:
  Formula();  // true

  static Formula truth();
  static Formula falsity();
  static Formula constant(bool value);
  static Formula less(std::string a, std::string b);
  static Formula eq(std::string a, std::string b, std::int64_t offset = 0);
  static Formula negate(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula implies(Formula l, Formula r);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);

  Op op() const;
  const std::string& lhs() const;
  const std::string& rhs() const;
  const std::string& var() const { return lhs(); }
  std::int64_t offset() const;
  const Formula& left() const;   // Not, And, Or, Implies
  const Formula& right() const;  // And, Or, Implies
  const Formula& body() const;   // Exists, Forall

  bool is_atom() const { return op() == Op::Less || op() == Op::Eq; }
  bool is_constant() const { return op() == Op::True || op() == Op::False; }
  bool is_quantifier() const { return op() == Op::Exists || op() == Op::Forall; }
  bool quantifier_free() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using VarOrder = std::vector<std::string>;

Formula parse(std::string_view text, Signature sig);
std::string render(const Formula& f);

// Free variables in first-occurrence order.
VarOrder free_vars(const Formula& f);

// Negations pushed onto atoms, implications expanded. Quantifiers are kept;
// a negated Exists becomes Forall and vice versa.
Formula nnf(const Formula& f);

// Largest |offset| over all atoms, 0 if none.
std::int64_t max_abs_offset(const Formula& f);
std::size_t quantifier_count(const Formula& f);
std::size_t quantifier_depth(const Formula& f);

// Throws std::invalid_argument if f uses an atom foreign to sig.
void check_signature(const Formula& f, Signature sig);

// Constant-folding constructors.
Formula and_of(const std::vector<Formula>& parts);
Formula or_of(const std::vector<Formula>& parts);
Formula not_of(const Formula& f);

// Folds constants and reflexive atoms (x < x, x = x + k) bottom-up.
Formula simplify(const Formula& f);

struct Literal {
  Formula atom;
  bool positive = true;

  Formula to_formula() const { return positive ? atom : Formula::negate(atom); }
  friend bool operator==(const Literal& a, const Literal& b) {
    return a.positive == b.positive && a.atom == b.atom;
  }
};

using Conjunct = std::vector<Literal>;
using Dnf = std::vector<Conjunct>;

// Disjunctive normal form of a quantifier-free formula. Constants are folded
// away: an empty Dnf is false, a Dnf holding an empty conjunct is true.
Dnf to_dnf(const Formula& quantifier_free);
Formula from_dnf(const Dnf& d);

// Evaluates a quantifier-free formula, delegating atoms to `atom`.
template <class AtomFn>
bool eval_qf(const Formula& f, AtomFn&& atom) {
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Less:
    case Op::Eq: return atom(f);
    case Op::Not: return !eval_qf(f.left(), atom);
    case Op::And: return eval_qf(f.left(), atom) && eval_qf(f.right(), atom);
    case Op::Or: return eval_qf(f.left(), atom) || eval_qf(f.right(), atom);
    case Op::Implies: return !eval_qf(f.left(), atom) || eval_qf(f.right(), atom);
    case Op::Exists:
    case Op::Forall: break;
  }
  throw std::invalid_argument("eval_qf: formula is not quantifier-free");
}

// Position of `name` in vars; throws std::invalid_argument if absent.
std::size_t index_of(const VarOrder& vars, const std::string& name);

// Parses "x,y,z" (whitespace tolerated); rejects duplicates and bad names.
VarOrder parse_var_order(std::string_view text);

}  // namespace deflat
