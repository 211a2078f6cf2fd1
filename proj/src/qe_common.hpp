#pragma once

#include <optional>
#include <string>

#include "deflat/formula.hpp"

namespace deflat::detail {

// Truth value of a literal whose atom relates a variable to itself.
inline std::optional<bool> fold_reflexive(const Literal& lit) {
  const Formula& a = lit.atom;
  if (a.lhs() != a.rhs()) return std::nullopt;
  bool v = a.op() == Op::Eq ? a.offset() == 0 : false;
  return lit.positive ? v : !v;
}

inline bool mentions(const Literal& lit, const std::string& v) {
  return lit.atom.lhs() == v || lit.atom.rhs() == v;
}

// Bottom-up elimination: every Exists is handed to exists_qf(var, body) with a
// quantifier-free body; Forall goes through duality.
template <class ExistsQf>
Formula eliminate_with(const Formula& f, ExistsQf&& exists_qf) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Less:
    case Op::Eq: return f;
    case Op::Not: return not_of(eliminate_with(f.left(), exists_qf));
    case Op::And: return and_of({eliminate_with(f.left(), exists_qf), eliminate_with(f.right(), exists_qf)});
    case Op::Or: return or_of({eliminate_with(f.left(), exists_qf), eliminate_with(f.right(), exists_qf)});
    case Op::Implies:
      return or_of({not_of(eliminate_with(f.left(), exists_qf)), eliminate_with(f.right(), exists_qf)});
    case Op::Exists: return exists_qf(f.var(), eliminate_with(f.body(), exists_qf));
    case Op::Forall:
      return not_of(exists_qf(f.var(), not_of(eliminate_with(f.body(), exists_qf))));
  }
  return f;
}

}  // namespace deflat::detail
