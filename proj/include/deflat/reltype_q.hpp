#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "deflat/formula.hpp"

namespace deflat {

// Weak ordering of argument positions: ranks[i] is the block of position i,
// blocks numbered 0..m-1 bottom up, every block non-empty.
struct OrderType {
  std::vector<int> ranks;

  std::size_t arity() const { return ranks.size(); }
  int blocks() const;

  auto operator<=>(const OrderType&) const = default;
};

// Complete semantics of a relation definable in <Q, <>.
struct OrderTypeSet {
  std::size_t arity = 0;
  std::set<OrderType> members;
};

enum class QKind { Trivial, Order, Between, Cyclic, Separation };
enum class TrivialSub { True, False, EqualityOnly };

struct QClass {
  QKind kind = QKind::Trivial;
  TrivialSub sub = TrivialSub::True;  // meaningful for Trivial only

  static QClass trivial(TrivialSub s) { return {QKind::Trivial, s}; }
  static QClass of(QKind k) { return {k, TrivialSub::True}; }

  friend bool operator==(const QClass& a, const QClass& b) {
    return a.kind == b.kind && (a.kind != QKind::Trivial || a.sub == b.sub);
  }
};

std::string to_string(const QClass& c);

// Groups of order automorphisms extended by one permutation of each kind.
enum class GroupId { Shifts, B, C, S };

std::string to_string(GroupId g);

// All weak orderings of n positions, lexicographic in the rank vector.
std::vector<OrderType> enumerate_order_types(std::size_t n);

OrderType order_type_of(std::span<const long long> tuple);
OrderType reverse_type(const OrderType& t);
// Throws std::out_of_range unless 0 <= s < blocks.
OrderType rotate_type(const OrderType& t, int s);

// Requires free_vars(f) to be a subset of vars.
OrderTypeSet order_type_set(const Formula& f, const VarOrder& vars);

struct QClosure {
  bool partition_only = false;  // invariant under every relabelling of blocks
  bool reversal = false;
  bool rotation = false;
};

QClosure closure_flags(const OrderTypeSet& ots);
QClass classify_q(const OrderTypeSet& ots);

// sigma in one-line notation over 1..k. Throws std::invalid_argument if sigma
// is not a permutation.
bool realizes(GroupId g, std::span<const int> sigma);

Formula canonical_formula_q(const QClass& c);

}  // namespace deflat
