#include "deflat/reltype_z.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "deflat/qe_succ.hpp"
#include "deflat/reltype_q.hpp"

namespace deflat {

std::optional<std::int64_t> DiffPattern::diff(std::size_t i, std::size_t j) const {
  if (galaxy.at(i) != galaxy.at(j)) return std::nullopt;
  return offset[i] - offset[j];
}

int DiffPattern::galaxies() const {
  return galaxy.empty() ? 0 : *std::max_element(galaxy.begin(), galaxy.end()) + 1;
}

std::string to_string(const DiffPattern& p) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < p.arity(); ++i) {
    if (i) os << ' ';
    os << 'g' << p.galaxy[i] << ':' << p.offset[i];
  }
  os << ']';
  return os.str();
}

namespace {

// Canonicalizes a pattern whose galaxy labels are arbitrary keys.
template <class Key>
DiffPattern regroup(const DiffPattern& p, const std::vector<Key>& keys) {
  std::vector<Key> order;
  DiffPattern out;
  out.galaxy.resize(p.arity());
  out.offset = p.offset;
  for (std::size_t i = 0; i < p.arity(); ++i) {
    auto it = std::find(order.begin(), order.end(), keys[i]);
    if (it == order.end()) {
      order.push_back(keys[i]);
      it = order.end() - 1;
    }
    out.galaxy[i] = static_cast<int>(it - order.begin());
  }
  std::vector<std::int64_t> lo(order.size(), 0);
  std::vector<bool> seen(order.size(), false);
  for (std::size_t i = 0; i < p.arity(); ++i) {
    auto g = static_cast<std::size_t>(out.galaxy[i]);
    if (!seen[g] || out.offset[i] < lo[g]) lo[g] = out.offset[i];
    seen[g] = true;
  }
  for (std::size_t i = 0; i < p.arity(); ++i) out.offset[i] -= lo[static_cast<std::size_t>(out.galaxy[i])];
  return out;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

DiffPattern canonicalize(DiffPattern p) {
  if (p.offset.size() != p.galaxy.size()) throw std::invalid_argument("pattern: galaxy/offset length mismatch");
  return regroup(p, p.galaxy);
}

DiffPattern split_wide_gaps(const DiffPattern& p, std::int64_t window) {
  std::vector<std::pair<int, int>> keys(p.arity());
  std::vector<std::size_t> idx(p.arity());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(p.galaxy[a], p.offset[a]) < std::pair(p.galaxy[b], p.offset[b]);
  });
  int cluster = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    std::size_t i = idx[k];
    if (k > 0) {
      std::size_t prev = idx[k - 1];
      if (p.galaxy[prev] != p.galaxy[i] || p.offset[i] - p.offset[prev] > window) ++cluster;
    }
    keys[i] = {p.galaxy[i], cluster};
  }
  return regroup(p, keys);
}

std::vector<DiffPattern> enumerate_patterns(std::size_t n, std::int64_t window) {
  if (window < 1) throw std::invalid_argument("enumerate_patterns: window must be >= 1");
  std::vector<DiffPattern> out;
  // Set partitions as restricted growth strings; each block is one galaxy.
  std::vector<int> rgs(n, 0);
  while (true) {
    int blocks = n == 0 ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(blocks));
    for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(rgs[i])].push_back(i);

    // Per galaxy: every weak order of its members and every gap sequence.
    std::vector<std::vector<std::vector<std::int64_t>>> layouts(members.size());
    for (std::size_t g = 0; g < members.size(); ++g) {
      for (const auto& t : enumerate_order_types(members[g].size())) {
        int levels = t.blocks();
        std::vector<std::int64_t> gaps(static_cast<std::size_t>(std::max(levels - 1, 0)), 1);
        while (true) {
          std::vector<std::int64_t> level_offset(static_cast<std::size_t>(levels), 0);
          for (int l = 1; l < levels; ++l)
            level_offset[static_cast<std::size_t>(l)] =
                level_offset[static_cast<std::size_t>(l - 1)] + gaps[static_cast<std::size_t>(l - 1)];
          std::vector<std::int64_t> offs;
          for (int r : t.ranks) offs.push_back(level_offset[static_cast<std::size_t>(r)]);
          layouts[g].push_back(std::move(offs));
          std::size_t k = 0;
          while (k < gaps.size() && gaps[k] == window) gaps[k++] = 1;
          if (k == gaps.size()) break;
          ++gaps[k];
        }
      }
    }

    std::vector<std::size_t> pick(members.size(), 0);
    while (true) {
      DiffPattern p;
      p.galaxy = rgs;
      p.offset.assign(n, 0);
      for (std::size_t g = 0; g < members.size(); ++g)
        for (std::size_t k = 0; k < members[g].size(); ++k) p.offset[members[g][k]] = layouts[g][pick[g]][k];
      out.push_back(std::move(p));
      std::size_t g = 0;
      while (g < pick.size() && pick[g] + 1 == layouts[g].size()) pick[g++] = 0;
      if (g == pick.size()) break;
      ++pick[g];
    }

    // Next restricted growth string.
    std::size_t i = n;
    bool advanced = false;
    while (i > 1) {
      --i;
      int prefix_max = *std::max_element(rgs.begin(), rgs.begin() + static_cast<std::ptrdiff_t>(i));
      if (rgs[i] <= prefix_max) {
        ++rgs[i];
        std::fill(rgs.begin() + static_cast<std::ptrdiff_t>(i) + 1, rgs.end(), 0);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

PatternTable::PatternTable(std::size_t arity, std::int64_t window, std::map<DiffPattern, bool> values)
    : arity_(arity), window_(window), values_(std::move(values)) {
  auto domain = enumerate_patterns(arity, window);
  if (domain.size() != values_.size())
    throw std::invalid_argument("pattern table: expected " + std::to_string(domain.size()) + " entries, got " +
                                std::to_string(values_.size()));
  for (const auto& p : domain)
    if (values_.count(p) == 0) throw std::invalid_argument("pattern table: missing entry " + to_string(p));
}

std::size_t PatternTable::true_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](const auto& kv) { return kv.second; }));
}

bool PatternTable::at(const DiffPattern& p) const {
  if (p.arity() != arity_) throw std::invalid_argument("pattern table: arity mismatch");
  auto it = values_.find(split_wide_gaps(p, window_));
  if (it == values_.end()) throw std::logic_error("pattern table: no entry for " + to_string(p));
  return it->second;
}

PatternTable pattern_table(const Formula& qf, const VarOrder& vars, std::int64_t window) {
  std::int64_t w = width(qf);
  if (window == 0) window = w;
  if (window < w)
    throw std::invalid_argument("window " + std::to_string(window) + " is below the formula width " +
                                std::to_string(w));
  for (const auto& v : free_vars(qf)) index_of(vars, v);
  std::map<DiffPattern, bool> values;
  for (auto& p : enumerate_patterns(vars.size(), window)) {
    bool v = eval_qf(qf, [&](const Formula& a) {
      auto d = p.diff(index_of(vars, a.lhs()), index_of(vars, a.rhs()));
      return d && *d == a.offset();
    });
    values.emplace(std::move(p), v);
  }
  return PatternTable(vars.size(), window, std::move(values));
}

bool m_indistinguishable(const DiffPattern& a, const DiffPattern& b, std::int64_t m) {
  if (a.arity() != b.arity()) throw std::invalid_argument("m_indistinguishable: arity mismatch");
  for (std::size_t i = 0; i < a.arity(); ++i) {
    for (std::size_t j = 0; j < a.arity(); ++j) {
      auto da = a.diff(i, j), db = b.diff(i, j);
      bool close = (da && (*da < m && *da > -m)) || (db && (*db < m && *db > -m));
      if (close && da != db) return false;
    }
  }
  return true;
}

DiffPattern reduce_pattern(const DiffPattern& p, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("reduce_pattern: m must be >= 1");
  std::vector<std::pair<int, std::int64_t>> keys(p.arity());
  for (std::size_t i = 0; i < p.arity(); ++i) keys[i] = {p.galaxy[i], floor_mod(p.offset[i], m)};
  return regroup(p, keys);
}

DiffPattern colocation_pattern(const DiffPattern& p) {
  std::vector<std::pair<int, std::int64_t>> keys(p.arity());
  for (std::size_t i = 0; i < p.arity(); ++i) keys[i] = {p.galaxy[i], p.offset[i]};
  return regroup(p, keys);
}

DiffPattern reflect_galaxies(const DiffPattern& p, std::uint64_t mask) {
  if (p.galaxies() > 64) throw std::invalid_argument("reflect_galaxies: more than 64 galaxies");
  DiffPattern q = p;
  for (std::size_t i = 0; i < q.arity(); ++i)
    if (mask >> q.galaxy[i] & 1U) q.offset[i] = -q.offset[i];
  return canonicalize(std::move(q));
}

bool is_A_invariant(const PatternTable& t, std::int64_t m) {
  if (m == 1) return true;
  for (const auto& [p, v] : t.values())
    if (t.at(reduce_pattern(p, m)) != v) return false;
  return true;
}

bool flip_global(const PatternTable& t) {
  for (const auto& [p, v] : t.values())
    if (t.at(reflect_galaxies(p, ~std::uint64_t{0})) != v) return false;
  return true;
}

bool flip_perline(const PatternTable& t, std::int64_t d) {
  std::set<DiffPattern> reduced;
  for (const auto& entry : t.values()) reduced.insert(reduce_pattern(entry.first, d));
  for (const auto& r : reduced) {
    bool v = t.at(r);
    std::uint64_t lines = std::uint64_t{1} << r.galaxies();
    for (std::uint64_t mask = 1; mask < lines; ++mask)
      if (t.at(reflect_galaxies(r, mask)) != v) return false;
  }
  return true;
}

bool is_stable(const PatternTable& t) {
  const std::int64_t w = t.window();
  for (const auto& [p, v] : t.values()) {
    // Split each galaxy at its gaps of exactly w, one gap at a time.
    std::vector<std::size_t> idx(p.arity());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::pair(p.galaxy[a], p.offset[a]) < std::pair(p.galaxy[b], p.offset[b]);
    });
    for (std::size_t k = 1; k < idx.size(); ++k) {
      std::size_t prev = idx[k - 1], cur = idx[k];
      if (p.galaxy[prev] != p.galaxy[cur] || p.offset[cur] - p.offset[prev] != w) continue;
      std::vector<std::pair<int, bool>> keys(p.arity());
      for (std::size_t i = 0; i < p.arity(); ++i)
        keys[i] = {p.galaxy[i], p.galaxy[i] == p.galaxy[cur] && p.offset[i] >= p.offset[cur]};
      if (t.values().at(split_wide_gaps(regroup(p, keys), w)) != v) return false;
    }
  }
  return true;
}

std::string to_string(const ZClass& c) {
  switch (c.kind) {
    case ZKind::Trivial: return c.truth ? "trivial(true)" : "trivial(false)";
    case ZKind::Equality: return "equality";
    case ZKind::A: return "A(" + std::to_string(c.d) + ")";
    case ZKind::B: return "B(" + std::to_string(c.d) + ")";
    case ZKind::C: return "C(" + std::to_string(c.d) + ")";
  }
  return "?";
}

ZClass classify_z(const PatternTable& t) {
  if (!is_stable(t))
    throw std::domain_error("pattern table is not induced by a formula of width " + std::to_string(t.window()) +
                            ": a gap of the window size behaves differently from a galaxy split");
  std::size_t ones = t.true_count();
  if (ones == 0) return ZClass::trivial(false);
  if (ones == t.values().size()) return ZClass::trivial(true);

  bool equality_only = std::all_of(t.values().begin(), t.values().end(),
                                   [&](const auto& kv) { return t.at(colocation_pattern(kv.first)) == kv.second; });
  if (equality_only) return ZClass::equality();

  std::int64_t d = 1;
  for (std::int64_t m = t.window() - 1; m > 1; --m) {
    if (is_A_invariant(t, m)) {
      d = m;
      break;
    }
  }
  if (flip_perline(t, d)) return ZClass::lettered(ZKind::C, d);
  if (flip_global(t)) return ZClass::lettered(ZKind::B, d);
  return ZClass::lettered(ZKind::A, d);
}

DiffPattern normalize_vector(const PatternTable& t, const DiffPattern& p, std::int64_t d) {
  if (d < 1) throw std::invalid_argument("normalize_vector: the class has no divisor");
  if (p.arity() != t.arity()) throw std::invalid_argument("normalize_vector: arity mismatch");
  return reduce_pattern(p, d);
}

Formula canonical_formula_z(const ZClass& c) {
  const std::int64_t n = c.d;
  if (c.lettered() && n < 1) throw std::invalid_argument("canonical_formula_z: divisor must be >= 1");
  switch (c.kind) {
    case ZKind::Trivial: return Formula::constant(c.truth);
    case ZKind::Equality: return Formula::eq("x", "y");
    case ZKind::A: return Formula::eq("x1", "x2", n);
    case ZKind::B:
      return Formula::disj(Formula::conj(Formula::eq("x1", "x2", n), Formula::eq("x3", "x4", n)),
                           Formula::conj(Formula::eq("x2", "x1", n), Formula::eq("x4", "x3", n)));
    case ZKind::C: return Formula::disj(Formula::eq("x1", "x2", n), Formula::eq("x2", "x1", n));
  }
  return Formula::truth();
}

}  // namespace deflat
