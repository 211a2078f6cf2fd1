#include "deflat/reltype_q.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "deflat/qe_dlo.hpp"

namespace deflat {

int OrderType::blocks() const {
  return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end()) + 1;
}

std::string to_string(const QClass& c) {
  switch (c.kind) {
    case QKind::Order: return "order";
    case QKind::Between: return "between";
    case QKind::Cyclic: return "cyclic";
    case QKind::Separation: return "separation";
    case QKind::Trivial: break;
  }
  switch (c.sub) {
    case TrivialSub::True: return "trivial(true)";
    case TrivialSub::False: return "trivial(false)";
    case TrivialSub::EqualityOnly: return "trivial(equality)";
  }
  return "trivial";
}

std::string to_string(GroupId g) {
  switch (g) {
    case GroupId::Shifts: return "shifts";
    case GroupId::B: return "B";
    case GroupId::C: return "C";
    case GroupId::S: return "S";
  }
  return "?";
}

std::vector<OrderType> enumerate_order_types(std::size_t n) {
  std::vector<OrderType> out;
  std::vector<int> r(n, 0);
  std::vector<bool> seen;
  while (true) {
    // Surjective onto 0..max?
    int m = n == 0 ? 0 : *std::max_element(r.begin(), r.end()) + 1;
    seen.assign(static_cast<std::size_t>(m), false);
    for (int x : r) seen[static_cast<std::size_t>(x)] = true;
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) out.push_back(OrderType{r});
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (r[i] + 1 < static_cast<int>(n)) {
        ++r[i];
        std::fill(r.begin() + static_cast<std::ptrdiff_t>(i) + 1, r.end(), 0);
        break;
      }
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

OrderType order_type_of(std::span<const long long> tuple) {
  std::vector<long long> sorted(tuple.begin(), tuple.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  OrderType t;
  t.ranks.reserve(tuple.size());
  for (long long v : tuple)
    t.ranks.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()));
  return t;
}

OrderType reverse_type(const OrderType& t) {
  int m = t.blocks();
  OrderType out = t;
  for (int& r : out.ranks) r = m - 1 - r;
  return out;
}

OrderType rotate_type(const OrderType& t, int s) {
  int m = t.blocks();
  if (s < 0 || (s >= m && !(m == 0 && s == 0)))
    throw std::out_of_range("rotate_type: shift " + std::to_string(s) + " outside [0, " + std::to_string(m) + ")");
  OrderType out = t;
  for (int& r : out.ranks) r = (r + s) % m;
  return out;
}

OrderTypeSet order_type_set(const Formula& f, const VarOrder& vars) {
  for (const auto& v : free_vars(f)) index_of(vars, v);
  Formula qf = eliminate_dlo(f);
  OrderTypeSet out;
  out.arity = vars.size();
  for (auto& t : enumerate_order_types(vars.size())) {
    bool holds = eval_qf(qf, [&](const Formula& a) {
      int l = t.ranks[index_of(vars, a.lhs())];
      int r = t.ranks[index_of(vars, a.rhs())];
      return a.op() == Op::Less ? l < r : l == r;
    });
    if (holds) out.members.insert(std::move(t));
  }
  return out;
}

namespace {

// Block partition with blocks relabelled by first occurrence.
std::vector<int> partition_key(const OrderType& t) {
  std::map<int, int> relabel;
  std::vector<int> key;
  key.reserve(t.ranks.size());
  for (int r : t.ranks) {
    auto [it, inserted] = relabel.try_emplace(r, static_cast<int>(relabel.size()));
    key.push_back(it->second);
  }
  return key;
}

}  // namespace

QClosure closure_flags(const OrderTypeSet& ots) {
  QClosure c;
  std::map<std::vector<int>, bool> by_partition;
  c.partition_only = true;
  for (const auto& t : enumerate_order_types(ots.arity)) {
    bool in = ots.members.count(t) != 0;
    auto [it, inserted] = by_partition.try_emplace(partition_key(t), in);
    if (!inserted && it->second != in) {
      c.partition_only = false;
      break;
    }
  }
  c.reversal = std::all_of(ots.members.begin(), ots.members.end(),
                           [&](const OrderType& t) { return ots.members.count(reverse_type(t)) != 0; });
  c.rotation = std::all_of(ots.members.begin(), ots.members.end(), [&](const OrderType& t) {
    for (int s = 1; s < t.blocks(); ++s)
      if (ots.members.count(rotate_type(t, s)) == 0) return false;
    return true;
  });
  return c;
}

QClass classify_q(const OrderTypeSet& ots) {
  QClosure c = closure_flags(ots);
  if (c.partition_only) {
    if (ots.members.empty()) return QClass::trivial(TrivialSub::False);
    if (ots.members.size() == enumerate_order_types(ots.arity).size()) return QClass::trivial(TrivialSub::True);
    return QClass::trivial(TrivialSub::EqualityOnly);
  }
  if (c.reversal && c.rotation) return QClass::of(QKind::Separation);
  if (c.rotation) return QClass::of(QKind::Cyclic);
  if (c.reversal) return QClass::of(QKind::Between);
  return QClass::of(QKind::Order);
}

bool realizes(GroupId g, std::span<const int> sigma) {
  const int k = static_cast<int>(sigma.size());
  if (k == 0) throw std::invalid_argument("realizes: empty permutation");
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (int x : sigma) {
    if (x < 1 || x > k || seen[static_cast<std::size_t>(x - 1)])
      throw std::invalid_argument("realizes: not a permutation of 1.." + std::to_string(k));
    seen[static_cast<std::size_t>(x - 1)] = true;
  }
  auto rotation = [&](bool reversed) {
    for (int s = 0; s < k; ++s) {
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) {
        int v = reversed ? ((k - 1 - i + s) % k) + 1 : ((i + s) % k) + 1;
        ok = sigma[static_cast<std::size_t>(i)] == v;
      }
      if (ok) return true;
    }
    return false;
  };
  auto identity = [&] {
    for (int i = 0; i < k; ++i)
      if (sigma[static_cast<std::size_t>(i)] != i + 1) return false;
    return true;
  };
  auto reversal = [&] {
    for (int i = 0; i < k; ++i)
      if (sigma[static_cast<std::size_t>(i)] != k - i) return false;
    return true;
  };
  switch (g) {
    case GroupId::Shifts: return identity();
    case GroupId::B: return identity() || reversal();
    case GroupId::C: return rotation(false);
    case GroupId::S: return rotation(false) || rotation(true);
  }
  return false;
}

namespace {

// Conjunction placing vars in the strict order given by ranks.
Formula chain(const OrderType& t, const VarOrder& vars) {
  std::vector<std::string> by_rank(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) by_rank[static_cast<std::size_t>(t.ranks[i])] = vars[i];
  std::vector<Formula> links;
  for (std::size_t i = 0; i + 1 < by_rank.size(); ++i) links.push_back(Formula::less(by_rank[i], by_rank[i + 1]));
  return and_of(links);
}

Formula dihedral_union(const VarOrder& vars, bool with_rotations, bool with_reversal) {
  OrderType id;
  id.ranks.resize(vars.size());
  std::iota(id.ranks.begin(), id.ranks.end(), 0);
  std::vector<OrderType> images;
  int m = id.blocks();
  for (int s = 0; s < (with_rotations ? m : 1); ++s) {
    images.push_back(rotate_type(id, s));
    if (with_reversal) images.push_back(reverse_type(rotate_type(id, s)));
  }
  std::vector<Formula> disjuncts;
  for (const auto& t : images) disjuncts.push_back(chain(t, vars));
  return or_of(disjuncts);
}

}  // namespace

Formula canonical_formula_q(const QClass& c) {
  switch (c.kind) {
    case QKind::Order: return Formula::less("x", "y");
    case QKind::Between: return dihedral_union({"x", "y", "z"}, false, true);
    case QKind::Cyclic: return dihedral_union({"x", "y", "z"}, true, false);
    case QKind::Separation: return dihedral_union({"x", "y", "z", "w"}, true, true);
    case QKind::Trivial: break;
  }
  switch (c.sub) {
    case TrivialSub::True: return Formula::truth();
    case TrivialSub::False: return Formula::falsity();
    case TrivialSub::EqualityOnly: return Formula::eq("x", "y");
  }
  return Formula::truth();
}

}  // namespace deflat
