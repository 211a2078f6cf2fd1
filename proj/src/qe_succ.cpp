#include "deflat/qe_succ.hpp"

#include <algorithm>
#include <stdexcept>

#include "qe_common.hpp"

namespace deflat {

namespace {

std::int64_t add_checked(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("offset arithmetic overflows 64 bits");
  return out;
}

std::int64_t sub_checked(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_sub_overflow(a, b, &out)) throw std::overflow_error("offset arithmetic overflows 64 bits");
  return out;
}

// Rewrites the atom under v := w + c.
Literal substitute(const Literal& lit, const std::string& v, const std::string& w, std::int64_t c) {
  const Formula& a = lit.atom;
  bool l = a.lhs() == v, r = a.rhs() == v;
  Formula atom;
  if (l && r)
    atom = Formula::eq(w, w, a.offset());
  else if (l)  // w + c = b + k  ->  w = b + (k - c)
    atom = Formula::eq(w, a.rhs(), sub_checked(a.offset(), c));
  else  // a = w + c + k
    atom = Formula::eq(a.lhs(), w, add_checked(a.offset(), c));
  return Literal{std::move(atom), lit.positive};
}

Formula eliminate_conjunct(const std::string& v, const Conjunct& c) {
  const Literal* pin = nullptr;
  for (const auto& lit : c) {
    if (lit.positive && (lit.atom.lhs() == v) != (lit.atom.rhs() == v)) {
      pin = &lit;
      break;
    }
  }

  std::vector<Formula> kept;
  std::string w;
  std::int64_t shift = 0;
  if (pin) {
    const Formula& a = pin->atom;
    if (a.lhs() == v) {  // v = w + k
      w = a.rhs();
      shift = a.offset();
    } else {  // w = v + k, so v = w - k
      w = a.lhs();
      shift = sub_checked(0, a.offset());
    }
  }

  for (const auto& lit : c) {
    if (!detail::mentions(lit, v)) {
      kept.push_back(lit.to_formula());
      continue;
    }
    if (auto folded = detail::fold_reflexive(lit)) {
      if (!*folded) return Formula::falsity();
      continue;
    }
    // Without a defining equation only disequalities remain on v, and an
    // infinite domain always has a value avoiding finitely many points.
    if (!pin) continue;
    Literal s = substitute(lit, v, w, shift);
    if (auto folded = detail::fold_reflexive(s)) {
      if (!*folded) return Formula::falsity();
      continue;
    }
    kept.push_back(s.to_formula());
  }
  return and_of(kept);
}

Formula exists_qf(const std::string& v, const Formula& body) {
  Dnf d = to_dnf(body);
  std::vector<Formula> out;
  out.reserve(d.size());
  for (const auto& c : d) {
    Formula e = eliminate_conjunct(v, c);
    if (e.op() == Op::True) return e;
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
  }
  return or_of(out);
}

}  // namespace

Formula eliminate_succ(const Formula& f) {
  check_signature(f, Signature::ZSucc);
  return simplify(nnf(detail::eliminate_with(f, exists_qf)));
}

std::int64_t width(const Formula& quantifier_free) {
  if (!quantifier_free.quantifier_free()) throw std::invalid_argument("width: formula has quantifiers");
  std::int64_t k = max_abs_offset(quantifier_free);
  return add_checked(k, 1);
}

}  // namespace deflat
