#include "deflat/oracle.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace deflat {

std::string to_string(const ZPoint& p) {
  return "(" + std::to_string(p.offset) + ",g" + std::to_string(p.galaxy) + ")";
}

namespace {

// Formula with variables resolved to environment slots. Free variables take
// slots 0..n-1; a quantifier at binding depth k uses slot n+k.
struct Compiled {
  struct Node {
    Op op;
    std::size_t a = 0, b = 0;  // slots (atoms), bound slot (quantifiers)
    std::int64_t k = 0;
    int l = -1, r = -1;
    std::int64_t reach = 0;    // quantifiers: witness radius (Z)
  };
  std::vector<Node> nodes;
  int root = -1;
  std::size_t slots = 0;
};

class Compiler {
 public:
  explicit Compiler(const VarOrder& vars) : free_(vars) {
    out_.slots = vars.size();
    for (std::size_t i = 0; i < vars.size(); ++i) scope_.emplace_back(vars[i], i);
  }

  Compiled run(const Formula& f) {
    out_.root = visit(f, 0);
    return std::move(out_);
  }

 private:
  std::size_t slot(const std::string& v) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == v) return it->second;
    throw std::invalid_argument("free variable '" + v + "' has no argument position");
  }

  int visit(const Formula& f, std::size_t depth) {
    Compiled::Node n{f.op()};
    switch (f.op()) {
      case Op::True:
      case Op::False: break;
      case Op::Less:
      case Op::Eq:
        n.a = slot(f.lhs());
        n.b = slot(f.rhs());
        n.k = f.offset();
        break;
      case Op::Not: n.l = visit(f.left(), depth); break;
      case Op::And:
      case Op::Or:
      case Op::Implies:
        n.l = visit(f.left(), depth);
        n.r = visit(f.right(), depth);
        break;
      case Op::Exists:
      case Op::Forall: {
        n.a = free_.size() + depth;
        out_.slots = std::max(out_.slots, n.a + 1);
        n.reach = reach_bound(f.body());
        scope_.emplace_back(f.var(), n.a);
        n.l = visit(f.body(), depth + 1);
        scope_.pop_back();
        break;
      }
    }
    out_.nodes.push_back(n);
    return static_cast<int>(out_.nodes.size()) - 1;
  }

  const VarOrder& free_;
  std::vector<std::pair<std::string, std::size_t>> scope_;
  Compiled out_;
};

// Evaluates a compiled formula; Domain supplies atoms and witness sets.
template <class Value, class Domain>
class Evaluator {
 public:
  Evaluator(const Compiled& c, Domain& dom, std::span<const Value> point) : c_(c), dom_(dom), env_(c.slots) {
    std::copy(point.begin(), point.end(), env_.begin());
    in_scope_ = point.size();
  }

  bool run() { return eval(c_.root); }

 private:
  bool eval(int i) {
    const auto& n = c_.nodes[static_cast<std::size_t>(i)];
    switch (n.op) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::Less:
      case Op::Eq: return dom_.atom(n, env_[n.a], env_[n.b]);
      case Op::Not: return !eval(n.l);
      case Op::And: return eval(n.l) && eval(n.r);
      case Op::Or: return eval(n.l) || eval(n.r);
      case Op::Implies: return !eval(n.l) || eval(n.r);
      case Op::Exists:
      case Op::Forall: {
        bool want = n.op == Op::Exists;
        std::vector<Value> witnesses = dom_.witnesses(std::span<const Value>(env_.data(), in_scope_), n.reach);
        std::size_t saved = in_scope_;
        in_scope_ = std::max(in_scope_, n.a + 1);
        bool result = !want;
        for (const auto& w : witnesses) {
          env_[n.a] = w;
          if (eval(n.l) == want) {
            result = want;
            break;
          }
        }
        in_scope_ = saved;
        return result;
      }
    }
    return false;
  }

  const Compiled& c_;
  Domain& dom_;
  std::vector<Value> env_;
  std::size_t in_scope_ = 0;
};

struct DloDomain {
  bool atom(const Compiled::Node& n, const Rational& x, const Rational& y) const {
    return n.op == Op::Less ? x < y : x == y;
  }
  std::vector<Rational> witnesses(std::span<const Rational> scope, std::int64_t) const {
    std::vector<Rational> v(scope.begin(), scope.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.empty()) return {Rational(0)};
    std::vector<Rational> out;
    out.reserve(2 * v.size() + 1);
    out.push_back(v.front() - 1);
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(v[i]);
      if (i + 1 < v.size()) out.push_back((v[i] + v[i + 1]) / 2);
    }
    out.push_back(v.back() + 1);
    return out;
  }
};

struct SuccDomain {
  bool atom(const Compiled::Node& n, const ZPoint& x, const ZPoint& y) const {
    // x = y + k
    return x.galaxy == y.galaxy && static_cast<__int128>(x.offset) - y.offset == n.k;
  }
  std::vector<ZPoint> witnesses(std::span<const ZPoint> scope, std::int64_t reach) const {
    std::set<ZPoint> out;
    std::int64_t fresh = 0;
    for (const auto& p : scope) {
      fresh = std::max(fresh, p.galaxy + 1);
      for (std::int64_t k = -reach; k <= reach; ++k) out.insert(ZPoint{p.galaxy, p.offset + k});
    }
    out.insert(ZPoint{fresh, 0});
    return {out.begin(), out.end()};
  }
};

void check_arity(const VarOrder& vars, std::size_t n) {
  if (vars.size() != n)
    throw std::invalid_argument("expected a tuple of length " + std::to_string(vars.size()) + ", got " +
                                std::to_string(n));
}

std::vector<ZPoint> points_of(const DiffPattern& p) {
  std::vector<ZPoint> pts;
  pts.reserve(p.arity());
  for (std::size_t i = 0; i < p.arity(); ++i) pts.push_back(ZPoint{p.galaxy[i], p.offset[i]});
  return pts;
}

// Brute-force canonical patterns: every galaxy assignment and every offset
// vector in a box, filtered. Deliberately independent of enumerate_patterns.
std::vector<DiffPattern> brute_patterns(std::size_t n, std::int64_t max_gap) {
  std::vector<DiffPattern> out;
  if (n == 0) return {DiffPattern{}};
  const std::int64_t span = static_cast<std::int64_t>(n - 1) * max_gap;
  std::vector<int> gal(n, 0);
  std::vector<std::int64_t> off(n, 0);
  auto canonical = [&] {
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (gal[i] > next) return false;
      if (gal[i] == next) ++next;
    }
    for (int g = 0; g < next; ++g) {
      std::vector<std::int64_t> o;
      for (std::size_t i = 0; i < n; ++i)
        if (gal[i] == g) o.push_back(off[i]);
      std::sort(o.begin(), o.end());
      if (o.front() != 0) return false;
      for (std::size_t i = 1; i < o.size(); ++i)
        if (o[i] - o[i - 1] > max_gap) return false;
    }
    return true;
  };
  while (true) {
    if (canonical()) out.push_back(DiffPattern{gal, off});
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (off[i] < span) {
        ++off[i];
        break;
      }
      off[i] = 0;
      if (gal[i] + 1 < static_cast<int>(n)) {
        ++gal[i];
        break;
      }
      gal[i] = 0;
    }
    if (i == n) break;
  }
  return out;
}

VarOrder merged_vars(const Formula& f, const Formula& g) {
  VarOrder vf = free_vars(f), vg = free_vars(g);
  auto subset = [](const VarOrder& a, const VarOrder& b) {
    return std::all_of(a.begin(), a.end(), [&](const auto& v) { return std::find(b.begin(), b.end(), v) != b.end(); });
  };
  if (subset(vg, vf)) return vf;
  if (subset(vf, vg)) return vg;
  throw std::invalid_argument("equiv_check: free variables differ on both sides");
}

}  // namespace

bool eval_dlo(const Formula& f, const VarOrder& vars, std::span<const Rational> point) {
  check_signature(f, Signature::QOrder);
  check_arity(vars, point.size());
  Compiled c = Compiler(vars).run(f);
  DloDomain dom;
  return Evaluator<Rational, DloDomain>(c, dom, point).run();
}

bool eval_dlo(const Formula& f, std::span<const Rational> point) { return eval_dlo(f, free_vars(f), point); }

bool eval_succ(const Formula& f, const VarOrder& vars, std::span<const ZPoint> point) {
  check_signature(f, Signature::ZSucc);
  check_arity(vars, point.size());
  Compiled c = Compiler(vars).run(f);
  SuccDomain dom;
  return Evaluator<ZPoint, SuccDomain>(c, dom, point).run();
}

bool eval_succ(const Formula& f, const VarOrder& vars, const DiffPattern& p) {
  auto pts = points_of(p);
  return eval_succ(f, vars, pts);
}

bool eval_succ(const Formula& f, const DiffPattern& p) { return eval_succ(f, free_vars(f), p); }

std::int64_t reach_bound(const Formula& f) {
  std::int64_t k = max_abs_offset(f);
  std::int64_t q = static_cast<std::int64_t>(quantifier_count(f));
  std::int64_t out;
  if (__builtin_mul_overflow(k, q + 1, &out)) throw std::overflow_error("reach bound overflows 64 bits");
  return out;
}

bool equiv_check(const Formula& f, const Formula& g, Signature sig) {
  check_signature(f, sig);
  check_signature(g, sig);
  VarOrder vars = merged_vars(f, g);
  const std::size_t n = vars.size();
  if (sig == Signature::QOrder) {
    Compiled cf = Compiler(vars).run(f), cg = Compiler(vars).run(g);
    DloDomain dom;
    // Every weak ordering of n positions, as rank vectors.
    std::vector<int> ranks(n, 0);
    while (true) {
      int m = n == 0 ? 0 : *std::max_element(ranks.begin(), ranks.end()) + 1;
      std::vector<bool> hit(static_cast<std::size_t>(m), false);
      for (int r : ranks) hit[static_cast<std::size_t>(r)] = true;
      if (std::find(hit.begin(), hit.end(), false) == hit.end()) {
        std::vector<Rational> pt(ranks.begin(), ranks.end());
        if (Evaluator<Rational, DloDomain>(cf, dom, pt).run() != Evaluator<Rational, DloDomain>(cg, dom, pt).run())
          return false;
      }
      std::size_t i = 0;
      for (; i < n; ++i) {
        if (ranks[i] + 1 < static_cast<int>(n)) {
          ++ranks[i];
          break;
        }
        ranks[i] = 0;
      }
      if (i == n) return true;
    }
  }
  Compiled cf = Compiler(vars).run(f), cg = Compiler(vars).run(g);
  SuccDomain dom;
  std::int64_t gap = std::max(reach_bound(f), reach_bound(g)) + 1;
  for (const auto& p : brute_patterns(n, gap)) {
    auto pts = points_of(p);
    if (Evaluator<ZPoint, SuccDomain>(cf, dom, pts).run() != Evaluator<ZPoint, SuccDomain>(cg, dom, pts).run())
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lazy permutations

LazyPermQ::LazyPermQ(PermKind kind, std::uint64_t seed) : kind_(kind), rng_(seed) {
  if (!is_q_kind(kind)) throw std::invalid_argument("permutation kind " + to_string(kind) + " does not act on Q");
  std::int64_t c = std::uniform_int_distribution<std::int64_t>(-4, 3)(rng_);
  cut_lo_ = c;
  cut_hi_ = c + 1;
}

bool LazyPermQ::below_cut(const Rational& q) const {
  auto it = side_.find(q);
  return it != side_.end() && it->second;
}

LazyPermQ::Key LazyPermQ::key_of(const Rational& q) {
  if (kind_ == PermKind::Shift) return {0, q};
  if (kind_ == PermKind::QB) return {0, -q};
  bool below;
  if (auto it = side_.find(q); it != side_.end()) {
    below = it->second;
  } else {
    // The cut sits strictly between cut_lo_ and cut_hi_ and never on a
    // queried point; a query inside the gap narrows it.
    if (q <= cut_lo_)
      below = true;
    else if (q >= cut_hi_)
      below = false;
    else
      below = std::bernoulli_distribution(0.5)(rng_);
    if (below)
      cut_lo_ = std::max(cut_lo_, q);
    else
      cut_hi_ = std::min(cut_hi_, q);
    side_.emplace(q, below);
  }
  // C: everything above the cut comes first, each part increasing.
  // S: everything below the cut comes first, each part decreasing.
  if (kind_ == PermKind::QC) return {below ? 1 : 0, q};
  return {below ? 0 : 1, -q};
}

Rational LazyPermQ::apply(const Rational& q) {
  if (auto it = committed_.find(q); it != committed_.end()) return it->second;
  Key k = key_of(q);
  auto hi = by_key_.lower_bound(k);
  std::uniform_int_distribution<int> step(1, 4), frac(1, 7);
  Rational image;
  bool has_hi = hi != by_key_.end();
  bool has_lo = hi != by_key_.begin();
  if (has_lo && has_hi) {
    const Rational& a = std::prev(hi)->second;
    const Rational& b = hi->second;
    image = a + (b - a) * Rational(frac(rng_), 8);
  } else if (has_lo) {
    image = std::prev(hi)->second + step(rng_);
  } else if (has_hi) {
    image = hi->second - step(rng_);
  } else {
    image = std::uniform_int_distribution<int>(-5, 5)(rng_);
  }
  by_key_.emplace(std::move(k), image);
  committed_.emplace(q, image);
  return image;
}

LazyPermZ::LazyPermZ(PermSpec spec, std::uint64_t seed) : spec_(spec), rng_(seed) {
  if (!is_z_kind(spec.kind)) throw std::invalid_argument("permutation kind " + to_string(spec.kind) + " does not act on Z");
  if (spec.d < 1) throw std::invalid_argument("permutation step must be >= 1");
}

std::pair<std::int64_t, std::int64_t> LazyPermZ::line_of(const ZPoint& p) const {
  if (spec_.kind == PermKind::Shift) return {p.galaxy, 0};
  std::int64_t r = p.offset % spec_.d;
  if (r < 0) r += spec_.d;
  return {p.galaxy, r};
}

const LazyPermZ::LineImage& LazyPermZ::line_image(const ZPoint& p) {
  auto line = line_of(p);
  if (auto it = lines_.find(line); it != lines_.end()) return it->second;
  const bool whole_galaxy = spec_.kind == PermKind::Shift;
  const std::int64_t d = whole_galaxy ? 1 : spec_.d;
  std::pair<std::int64_t, std::int64_t> target;
  do {
    auto pool = static_cast<std::int64_t>(2 * lines_.size() + 4);
    target.first = std::uniform_int_distribution<std::int64_t>(0, pool - 1)(rng_);
    target.second = whole_galaxy ? 0 : std::uniform_int_distribution<std::int64_t>(0, d - 1)(rng_);
  } while (used_targets_.count(target) != 0 ||
           (whole_galaxy && std::any_of(used_targets_.begin(), used_targets_.end(),
                                        [&](const auto& kv) { return kv.first.first == target.first; })));
  used_targets_.emplace(target, true);

  int sign = 1;
  switch (spec_.kind) {
    case PermKind::ZSecond: sign = -1; break;
    case PermKind::ZThird:
      if (positive_lines_ + negative_lines_ == 1)
        sign = positive_lines_ ? -1 : 1;
      else
        sign = std::bernoulli_distribution(0.5)(rng_) ? 1 : -1;
      break;
    default: break;
  }
  (sign > 0 ? positive_lines_ : negative_lines_)++;
  std::int64_t base = target.second + d * std::uniform_int_distribution<std::int64_t>(-3, 3)(rng_);
  return lines_.emplace(line, LineImage{target.first, base, sign}).first->second;
}

int LazyPermZ::line_sign(const ZPoint& p) { return line_image(p).sign; }

ZPoint LazyPermZ::apply(const ZPoint& p) {
  if (auto it = committed_.find(p); it != committed_.end()) return it->second;
  const LineImage& li = line_image(p);
  // Position along the line, measured from its residue representative.
  std::int64_t along = p.offset - line_of(p).second;
  ZPoint image{li.galaxy, li.base + li.sign * along};
  committed_.emplace(p, image);
  return image;
}

LazyPermQ lazy_perm_q(PermKind kind, std::uint64_t seed) { return LazyPermQ(kind, seed); }
LazyPermZ lazy_perm_z(PermSpec spec, std::uint64_t seed) { return LazyPermZ(spec, seed); }

// ---------------------------------------------------------------------------
// Probes

std::string ProbeReport::summary() const {
  if (!violated) return "no violation in " + std::to_string(checked) + " samples";
  std::ostringstream os;
  os << "violation at sample " << checked << ": (";
  for (std::size_t i = 0; i < tuple.size(); ++i) os << (i ? ", " : "") << tuple[i];
  os << ") is " << (value_before ? "true" : "false") << " but its image (";
  for (std::size_t i = 0; i < image.size(); ++i) os << (i ? ", " : "") << image[i];
  os << ") is " << (value_before ? "false" : "true");
  return os.str();
}

ProbeReport invariance_probe(const Formula& f, LazyPermQ& perm, std::size_t samples, std::uint64_t seed) {
  check_signature(f, Signature::QOrder);
  const VarOrder vars = free_vars(f);
  const std::size_t n = vars.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(-12, 12);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  ProbeReport rep;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<Rational> t;
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && coin(rng) < 0.2)
        t.push_back(t[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)]);
      else
        t.push_back(Rational(coord(rng), 2));
    }
    std::vector<Rational> img;
    img.reserve(n);
    for (const auto& q : t) img.push_back(perm.apply(q));
    ++rep.checked;
    bool before = eval_dlo(f, vars, t);
    if (before != eval_dlo(f, vars, img)) {
      rep.violated = true;
      rep.value_before = before;
      for (const auto& q : t) rep.tuple.push_back(q.str());
      for (const auto& q : img) rep.image.push_back(q.str());
      return rep;
    }
  }
  return rep;
}

namespace {
void collect_offsets(const Formula& f, std::set<std::int64_t>& out) {
  switch (f.op()) {
    case Op::Eq:
      out.insert(f.offset());
      out.insert(-f.offset());
      return;
    case Op::Not: collect_offsets(f.left(), out); return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      collect_offsets(f.left(), out);
      collect_offsets(f.right(), out);
      return;
    case Op::Exists:
    case Op::Forall: collect_offsets(f.body(), out); return;
    default: return;
  }
}
}  // namespace

ProbeReport invariance_probe(const Formula& f, LazyPermZ& perm, std::size_t samples, std::uint64_t seed) {
  check_signature(f, Signature::ZSucc);
  const VarOrder vars = free_vars(f);
  const std::size_t n = vars.size();
  const std::int64_t w = reach_bound(f) + 1;
  const std::int64_t d = perm.spec().kind == PermKind::Shift ? 1 : perm.spec().d;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> galaxy(0, 2), far(-3 * w, 3 * w), near(-w, w), mult(-2, 2);
  std::set<std::int64_t> offset_set;
  collect_offsets(f, offset_set);
  const std::vector<std::int64_t> offsets(offset_set.begin(), offset_set.end());
  ProbeReport rep;
  std::int64_t k_max = 1;
  for (auto o : offsets) k_max = std::max(k_max, o);
  std::uniform_int_distribution<std::int64_t> tight(-k_max, k_max);

  // Positions cluster around earlier ones, at offsets the formula mentions,
  // at multiples of the permutation step, or just nearby. Some tuples sit in
  // one short stretch of a single galaxy.
  auto draw = [&] {
    std::vector<ZPoint> t;
    t.reserve(n);
    if (coin(rng) < 0.3) {
      ZPoint base{galaxy(rng), far(rng)};
      for (std::size_t i = 0; i < n; ++i) t.push_back({base.galaxy, base.offset + tight(rng)});
      return t;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && coin(rng) < 0.65) {
        const ZPoint& anchor = t[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];
        double r = coin(rng);
        std::int64_t delta = 0;
        if (r < 0.4 && !offsets.empty())
          delta = offsets[std::uniform_int_distribution<std::size_t>(0, offsets.size() - 1)(rng)];
        else if (r < 0.7)
          delta = d * mult(rng);
        else
          delta = near(rng);
        t.push_back(ZPoint{anchor.galaxy, anchor.offset + delta});
      } else {
        t.push_back(ZPoint{galaxy(rng), far(rng)});
      }
    }
    return t;
  };

  for (std::size_t s = 0; s < samples; ++s) {
    // Two samples in three hunt for a tuple inside, resp. outside, the
    // relation, since either kind can be rare.
    std::vector<ZPoint> t = draw();
    bool before = eval_succ(f, vars, t);
    const int hunt = static_cast<int>(s % 3);
    for (int tries = 0; hunt < 2 && before != (hunt == 0) && tries < 32; ++tries) {
      t = draw();
      before = eval_succ(f, vars, t);
    }
    std::vector<ZPoint> img;
    img.reserve(n);
    for (const auto& p : t) img.push_back(perm.apply(p));
    ++rep.checked;
    if (before != eval_succ(f, vars, img)) {
      rep.violated = true;
      rep.value_before = before;
      for (const auto& p : t) rep.tuple.push_back(to_string(p));
      for (const auto& p : img) rep.image.push_back(to_string(p));
      return rep;
    }
  }
  return rep;
}

}  // namespace deflat
