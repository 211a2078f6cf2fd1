#include <doctest.h>

#include <deflat/lattice.hpp>
#include <deflat/qe_succ.hpp>

#include <functional>
#include <map>

#include "gen.hpp"

using namespace deflat;

namespace {

Formula q(const char* s) { return parse(s, Signature::QOrder); }
Formula z(const char* s) { return parse(s, Signature::ZSucc); }

// Plain recursive evaluation over an explicit finite model: a few galaxies,
// each a cycle of length `cycle`. Cycles much longer than anything the
// formula can measure look like copies of Z to it, and unlike a cut-off
// interval they have no edges.
bool grid_eval(const Formula& f, std::map<std::string, ZPoint>& env, const std::vector<ZPoint>& domain,
               std::int64_t cycle) {
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Less: throw std::logic_error("order atom in Z formula");
    case Op::Eq: {
      const ZPoint& a = env.at(f.lhs());
      const ZPoint& b = env.at(f.rhs());
      std::int64_t gap = ((a.offset - b.offset - f.offset()) % cycle + cycle) % cycle;
      return a.galaxy == b.galaxy && gap == 0;
    }
    case Op::Not: return !grid_eval(f.left(), env, domain, cycle);
    case Op::And: return grid_eval(f.left(), env, domain, cycle) && grid_eval(f.right(), env, domain, cycle);
    case Op::Or: return grid_eval(f.left(), env, domain, cycle) || grid_eval(f.right(), env, domain, cycle);
    case Op::Implies: return !grid_eval(f.left(), env, domain, cycle) || grid_eval(f.right(), env, domain, cycle);
    case Op::Exists:
    case Op::Forall: {
      bool want = f.op() == Op::Exists;
      auto saved = env.find(f.var()) != env.end() ? std::optional(env[f.var()]) : std::nullopt;
      bool result = !want;
      for (const auto& pt : domain) {
        env[f.var()] = pt;
        if (grid_eval(f.body(), env, domain, cycle) == want) {
          result = want;
          break;
        }
      }
      if (saved)
        env[f.var()] = *saved;
      else
        env.erase(f.var());
      return result;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("eval_dlo examples") {
  std::vector<Rational> a{0, 1}, b{0, 0}, c{7};
  CHECK(eval_dlo(q("E z.(x<z & z<y)"), a));
  CHECK_FALSE(eval_dlo(q("E z.(x<z & z<y)"), b));
  CHECK(eval_dlo(q("A z.(z<x | x<z | x=z)"), c));
  CHECK(eval_dlo(q("E u. E v. (x < u & u < v & v < y)"), std::vector<Rational>{0, Rational(1, 1000)}));
  CHECK_FALSE(eval_dlo(q("A u. (u < x)"), c));
  CHECK_THROWS_AS(eval_dlo(q("x < y"), c), std::invalid_argument);
}

TEST_CASE("eval_succ examples") {
  DiffPattern one{{0}, {0}};
  CHECK(eval_succ(z("E z.(z = x + 1)"), one));
  CHECK(eval_succ(z("E z.(z = x+1 & z = y+1)"), DiffPattern{{0, 0}, {0, 0}}));
  CHECK_FALSE(eval_succ(z("E z.(z = x+1 & z = y+1)"), DiffPattern{{0, 0}, {1, 0}}));
  CHECK(eval_succ(z("A z.(z = x | !(z = x))"), one));
  CHECK(eval_succ(z("E u. (!(u = x) & !(u = y) & A v. !(v = u + 1) | v = x)"), DiffPattern{{0, 1}, {0, 0}}) ==
        eval_succ(z("E u. (!(u = x) & !(u = y) & A v. !(v = u + 1) | v = x)"), DiffPattern{{0, 0}, {0, 5}}));
  CHECK_THROWS_AS(eval_succ(z("x = y"), one), std::invalid_argument);
  std::vector<ZPoint> pts{{3, 10}, {3, 8}};
  CHECK(eval_succ(z("x = y + 2"), {"x", "y"}, pts));
}

TEST_CASE("equiv_check examples") {
  CHECK(equiv_check(q("E z.(x<z & z<y)"), q("x<y"), Signature::QOrder));
  CHECK(equiv_check(z("x=y+2"), z("y=x+-2"), Signature::ZSucc));
  CHECK_FALSE(equiv_check(z("x=y+2"), z("x=y+3"), Signature::ZSucc));
  CHECK_FALSE(equiv_check(z("x=y+20"), z("x=y+21"), Signature::ZSucc));
  CHECK(equiv_check(z("E u. x = u"), z("true"), Signature::ZSucc));
  CHECK_THROWS_AS(equiv_check(z("x=y"), z("x=w"), Signature::ZSucc), std::invalid_argument);
}

TEST_CASE("reach bound") {
  CHECK(reach_bound(z("x = y + 3")) == 3);
  CHECK(reach_bound(z("E u. (u = x + 2 & y = u + 2)")) == 4);
}

TEST_CASE("eval_succ agrees with grid enumeration (property)") {
  gen::FormulaGen g(Signature::ZSucc, 55);
  g.max_offset = 3;
  std::mt19937_64 rng(2);
  for (int i = 0; i < 80; ++i) {
    Formula f = g.formula(2);
    std::int64_t w = reach_bound(f) + 1;
    std::vector<ZPoint> domain;
    for (std::int64_t gal = 0; gal < 3; ++gal)
      for (std::int64_t o = -5 * w; o <= 5 * w; ++o) domain.push_back({gal, o});
    VarOrder vars{"x", "y"};
    for (int k = 0; k < 6; ++k) {
      // Free values stay in two galaxies near the middle of the grid.
      std::vector<ZPoint> pt;
      for (int j = 0; j < 2; ++j)
        pt.push_back({std::uniform_int_distribution<std::int64_t>(0, 1)(rng),
                      std::uniform_int_distribution<std::int64_t>(-w, w)(rng)});
      std::map<std::string, ZPoint> env{{"x", pt[0]}, {"y", pt[1]}};
      INFO(render(f), " at ", to_string(pt[0]), ", ", to_string(pt[1]));
      CHECK(eval_succ(f, vars, pt) == grid_eval(f, env, domain, 10 * w + 1));
    }
  }
}

TEST_CASE("equiv_check detects changed formulas (property)") {
  // Flipping one offset changes the relation unless the atom is irrelevant;
  // compare with a brute-force pattern sweep.
  gen::FormulaGen g(Signature::ZSucc, 56);
  for (int i = 0; i < 60; ++i) {
    Formula f = g.quantifier_free(2), h = g.quantifier_free(2);
    VarOrder vars{"x", "y"};
    bool same = true;
    for (const auto& p : enumerate_patterns(2, 10)) same = same && eval_succ(f, vars, p) == eval_succ(h, vars, p);
    auto fv = free_vars(f), hv = free_vars(h);
    std::sort(fv.begin(), fv.end());
    std::sort(hv.begin(), hv.end());
    bool comparable = std::includes(fv.begin(), fv.end(), hv.begin(), hv.end()) ||
                 std::includes(hv.begin(), hv.end(), fv.begin(), fv.end());
    if (!comparable) continue;
    INFO(render(f), " vs ", render(h));
    CHECK(equiv_check(f, h, Signature::ZSucc) == same);
  }
}

TEST_CASE("lazy Q permutations") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (auto kind : {PermKind::Shift, PermKind::QB, PermKind::QC, PermKind::QS}) {
      LazyPermQ p = lazy_perm_q(kind, seed);
      std::mt19937_64 rng(seed);
      std::vector<Rational> xs;
      for (int i = 0; i < 40; ++i) xs.push_back(Rational(std::uniform_int_distribution<int>(-40, 40)(rng), 4));
      for (const auto& x : xs) p.apply(x);
      // Injective.
      std::set<Rational> images;
      for (const auto& [k, v] : p.committed()) images.insert(v);
      CHECK(images.size() == p.committed().size());
      // Kind constraints on every committed pair.
      for (const auto& [a, fa] : p.committed())
        for (const auto& [b, fb] : p.committed()) {
          if (!(a < b)) continue;
          bool up = fa < fb;
          switch (kind) {
            case PermKind::Shift: CHECK(up); break;
            case PermKind::QB: CHECK_FALSE(up); break;
            case PermKind::QC: CHECK(up == (p.below_cut(a) == p.below_cut(b))); break;
            case PermKind::QS: CHECK(up != (p.below_cut(a) == p.below_cut(b))); break;
            default: break;
          }
          if (kind == PermKind::QC || kind == PermKind::QS) CHECK((p.below_cut(a) || !p.below_cut(b)));
        }
      // Same seed, same images.
      LazyPermQ again = lazy_perm_q(kind, seed);
      for (const auto& x : xs) CHECK(again.apply(x) == p.committed().at(x));
    }
  }
  CHECK_THROWS_AS(lazy_perm_q(PermKind::ZFirst, 0), std::invalid_argument);
}

TEST_CASE("lazy Z permutations") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (auto kind : {PermKind::Shift, PermKind::ZFirst, PermKind::ZSecond, PermKind::ZThird}) {
      for (std::int64_t d = 1; d <= 3; ++d) {
        LazyPermZ p = lazy_perm_z({kind, d}, seed);
        std::mt19937_64 rng(seed * 7 + d);
        std::vector<ZPoint> xs;
        for (int i = 0; i < 40; ++i)
          xs.push_back({std::uniform_int_distribution<std::int64_t>(0, 3)(rng),
                        std::uniform_int_distribution<std::int64_t>(-10, 10)(rng)});
        for (const auto& x : xs) p.apply(x);
        std::set<ZPoint> images;
        for (const auto& [k, v] : p.committed()) images.insert(v);
        CHECK(images.size() == p.committed().size());
        int pos = 0, neg = 0;
        for (const auto& x : xs) {
          ZPoint a = p.apply(x), b = p.apply({x.galaxy, x.offset + d});
          int sign = p.line_sign(x);
          CHECK(a.galaxy == b.galaxy);
          CHECK(b.offset - a.offset == sign * d);
          if (kind == PermKind::Shift || kind == PermKind::ZFirst) CHECK(sign == 1);
          if (kind == PermKind::ZSecond) CHECK(sign == -1);
          (sign > 0 ? pos : neg)++;
        }
        if (kind == PermKind::ZThird) {
          CHECK(pos > 0);
          CHECK(neg > 0);
        }
        if (kind == PermKind::Shift) {
          // Whole galaxies move rigidly.
          for (const auto& [a, fa] : p.committed())
            for (const auto& [b, fb] : p.committed())
              if (a.galaxy == b.galaxy) CHECK((fa.galaxy == fb.galaxy && fa.offset - fb.offset == a.offset - b.offset));
        }
        LazyPermZ again = lazy_perm_z({kind, d}, seed);
        for (const auto& x : xs) CHECK(again.apply(x) == p.committed().at(x));
      }
    }
  }
  CHECK_THROWS_AS(lazy_perm_z({PermKind::QB, 1}, 0), std::invalid_argument);
  CHECK_THROWS_AS(lazy_perm_z({PermKind::ZFirst, 0}, 0), std::invalid_argument);
}

TEST_CASE("probe examples") {
  Formula b = q("(x<y & y<z) | (z<y & y<x)");
  LazyPermQ pb = lazy_perm_q(PermKind::QB, 1);
  CHECK_FALSE(invariance_probe(b, pb, 200, 2).violated);
  LazyPermQ pb2 = lazy_perm_q(PermKind::QB, 1);
  ProbeReport r = invariance_probe(q("x<y"), pb2, 200, 2);
  CHECK(r.violated);
  // The counterexample is genuine.
  auto parse_q = [](const std::string& s) { return Rational(s); };
  std::vector<Rational> before, after;
  for (const auto& s : r.tuple) before.push_back(parse_q(s));
  for (const auto& s : r.image) after.push_back(parse_q(s));
  CHECK(eval_dlo(q("x<y"), before) == r.value_before);
  CHECK(eval_dlo(q("x<y"), after) != r.value_before);
  CHECK(pb2.committed().at(before[0]) == after[0]);

  LazyPermZ pz = lazy_perm_z({PermKind::ZThird, 2}, 3);
  CHECK_FALSE(invariance_probe(z("x=y+2 | y=x+2"), pz, 200, 4).violated);
  LazyPermZ pz2 = lazy_perm_z({PermKind::ZSecond, 2}, 3);
  CHECK(invariance_probe(z("x=y+2"), pz2, 200, 4).violated);
}

TEST_CASE("reported Q counterexamples are genuine (property)") {
  gen::FormulaGen g(Signature::QOrder, 57);
  int found = 0;
  for (int i = 0; i < 80; ++i) {
    Formula f = g.formula(3);
    auto vars = free_vars(f);
    if (vars.empty()) continue;
    for (auto kind : {PermKind::QB, PermKind::QC, PermKind::QS}) {
      LazyPermQ p = lazy_perm_q(kind, i);
      ProbeReport r = invariance_probe(f, p, 200, i + 1);
      if (!r.violated) continue;
      ++found;
      std::vector<Rational> a, b;
      for (const auto& s : r.tuple) a.push_back(Rational(s));
      for (std::size_t j = 0; j < a.size(); ++j) b.push_back(p.committed().at(a[j]));
      INFO(render(f), " ", r.summary());
      CHECK(eval_dlo(f, vars, a) != eval_dlo(f, vars, b));
    }
  }
  CHECK(found > 10);
}
