#include "deflat/qe_dlo.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "qe_common.hpp"

namespace deflat {

namespace {

// In a dense order !(a < b) is (b < a | a = b). Only literals on the variable
// being eliminated are rewritten, so the remaining bounds are all strict.
Formula split_non_strict(const Formula& f, const std::string& v) {
  switch (f.op()) {
    case Op::Not: {
      const Formula& a = f.left();
      if (a.op() == Op::Less && (a.lhs() == v || a.rhs() == v))
        return Formula::disj(Formula::less(a.rhs(), a.lhs()), Formula::eq(a.lhs(), a.rhs()));
      return f;
    }
    case Op::And:
      return Formula::conj(split_non_strict(f.left(), v), split_non_strict(f.right(), v));
    case Op::Or:
      return Formula::disj(split_non_strict(f.left(), v), split_non_strict(f.right(), v));
    default: return f;
  }
}

Literal substitute(const Literal& lit, const std::string& v, const std::string& w) {
  const Formula& a = lit.atom;
  std::string l = a.lhs() == v ? w : a.lhs();
  std::string r = a.rhs() == v ? w : a.rhs();
  Formula atom = a.op() == Op::Less ? Formula::less(std::move(l), std::move(r))
                                    : Formula::eq(std::move(l), std::move(r));
  return Literal{std::move(atom), lit.positive};
}

Formula eliminate_conjunct(const std::string& v, const Conjunct& c) {
  std::vector<Formula> kept;
  std::vector<std::string> lowers, uppers;
  const std::string* pin = nullptr;

  for (const auto& lit : c) {
    if (!detail::mentions(lit, v)) continue;
    if (auto folded = detail::fold_reflexive(lit)) {
      if (!*folded) return Formula::falsity();
      continue;
    }
    if (lit.atom.op() == Op::Eq && lit.positive) {
      pin = lit.atom.lhs() == v ? &lit.atom.rhs() : &lit.atom.lhs();
      break;
    }
  }

  for (const auto& lit : c) {
    if (!detail::mentions(lit, v)) {
      kept.push_back(lit.to_formula());
      continue;
    }
    if (pin) {
      Literal s = substitute(lit, v, *pin);
      if (auto folded = detail::fold_reflexive(s)) {
        if (!*folded) return Formula::falsity();
        continue;
      }
      kept.push_back(s.to_formula());
      continue;
    }
    if (auto folded = detail::fold_reflexive(lit)) {
      if (!*folded) return Formula::falsity();
      continue;
    }
    const Formula& a = lit.atom;
    if (a.op() == Op::Eq) continue;  // v != w: density leaves room to avoid w
    if (!lit.positive) throw std::logic_error("eliminate_dlo: unexpected non-strict bound");
    if (a.lhs() == v)
      uppers.push_back(a.rhs());
    else
      lowers.push_back(a.lhs());
  }

  for (const auto& lo : lowers) {
    for (const auto& hi : uppers) {
      if (lo == hi) return Formula::falsity();
      kept.push_back(Formula::less(lo, hi));
    }
  }
  return and_of(kept);
}

// Satisfiability of a conjunction of literals over a dense order: no cycle
// through a strict edge, and no disequality between values forced equal.
bool consistent(const Conjunct& c) {
  std::map<std::string, std::size_t> id;
  auto index = [&](const std::string& v) { return id.emplace(v, id.size()).first->second; };
  for (const auto& lit : c) {
    index(lit.atom.lhs());
    index(lit.atom.rhs());
  }
  const std::size_t n = id.size();
  // 0 = unrelated, 1 = below or equal, 2 = strictly below.
  std::vector<std::vector<int>> r(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
  for (const auto& lit : c) {
    std::size_t a = index(lit.atom.lhs()), b = index(lit.atom.rhs());
    if (lit.atom.op() == Op::Less) {
      if (lit.positive)
        r[a][b] = 2;
      else
        r[b][a] = std::max(r[b][a], 1);
    } else if (lit.positive) {
      r[a][b] = std::max(r[a][b], 1);
      r[b][a] = std::max(r[b][a], 1);
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = std::max(r[i][j], std::max(r[i][k], r[k][j]));
  for (std::size_t i = 0; i < n; ++i)
    if (r[i][i] == 2) return false;
  for (const auto& lit : c) {
    if (lit.atom.op() != Op::Eq || lit.positive) continue;
    std::size_t a = index(lit.atom.lhs()), b = index(lit.atom.rhs());
    if (r[a][b] && r[b][a]) return false;
  }
  return true;
}

Formula exists_qf(const std::string& v, const Formula& body) {
  Formula prepared = split_non_strict(nnf(body), v);
  Dnf d = to_dnf(prepared);
  std::vector<Formula> out;
  out.reserve(d.size());
  for (const auto& c : d) {
    if (!consistent(c)) continue;
    Formula e = eliminate_conjunct(v, c);
    if (e.op() == Op::True) return e;
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
  }
  return or_of(out);
}

}  // namespace

Formula eliminate_dlo(const Formula& f) {
  check_signature(f, Signature::QOrder);
  return simplify(nnf(detail::eliminate_with(f, exists_qf)));
}

}  // namespace deflat
