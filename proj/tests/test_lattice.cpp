#include <doctest.h>

#include <deflat/lattice.hpp>

#include <algorithm>
#include <numeric>

#include "gen.hpp"

using namespace deflat;

namespace {

std::vector<DefClass> q_classes() {
  return {QClass::of(QKind::Order), QClass::of(QKind::Between), QClass::of(QKind::Cyclic),
          QClass::of(QKind::Separation), QClass::trivial(TrivialSub::True)};
}

std::vector<DefClass> z_classes(std::int64_t max_d) {
  std::vector<DefClass> out{ZClass::equality(), ZClass::trivial(true), ZClass::trivial(false)};
  for (auto k : {ZKind::A, ZKind::B, ZKind::C})
    for (std::int64_t d = 1; d <= max_d; ++d) out.push_back(ZClass::lettered(k, d));
  return out;
}

bool ent(const DefClass& a, const DefClass& b) { return entails_class(a, b).holds; }

int strength(ZKind k) { return k == ZKind::A ? 3 : k == ZKind::B ? 2 : 1; }

}  // namespace

TEST_CASE("entailment examples") {
  auto A = [](std::int64_t d) { return DefClass(ZClass::lettered(ZKind::A, d)); };
  auto B = [](std::int64_t d) { return DefClass(ZClass::lettered(ZKind::B, d)); };
  auto C = [](std::int64_t d) { return DefClass(ZClass::lettered(ZKind::C, d)); };
  CHECK(ent(A(2), A(6)));
  CHECK_FALSE(ent(A(2), A(3)));
  for (int n = 1; n <= 4; ++n) {
    CHECK(ent(A(n), B(n)));
    CHECK_FALSE(ent(B(n), A(n)));
    CHECK(ent(B(n), C(n)));
    CHECK_FALSE(ent(C(n), B(n)));
  }
  CHECK(ent(B(2), C(6)));
  CHECK_FALSE(ent(QClass::of(QKind::Between), QClass::of(QKind::Order)));
  CHECK_FALSE(ent(QClass::of(QKind::Cyclic), QClass::of(QKind::Order)));
  for (const auto& c : q_classes()) CHECK(ent(c, c));
  for (const auto& c : z_classes(4)) CHECK(ent(c, c));
  CHECK_THROWS_AS(entails_class(A(1), QClass::of(QKind::Order)), std::invalid_argument);
}

TEST_CASE("formula entailment") {
  auto z = [](const char* s) { return parse(s, Signature::ZSucc); };
  auto q = [](const char* s) { return parse(s, Signature::QOrder); };
  CHECK(entails_formulas(z("x1=x2+2"), z("x1=x2+6"), Signature::ZSucc).holds);
  CHECK(entails_formulas(q("x<y"), q("(x<y & y<z) | (z<y & y<x)"), Signature::QOrder).holds);
  CHECK_FALSE(entails_formulas(z("x1=x2+2 | x2=x1+2"), z("x1=x2+2"), Signature::ZSucc).holds);
  CHECK_FALSE(entails_formulas(q("(x<y & y<z) | (z<y & y<x)"), q("x<y"), Signature::QOrder).holds);
}

TEST_CASE("Z divisibility table (exhaustive)") {
  for (auto x : {ZKind::A, ZKind::B, ZKind::C})
    for (auto y : {ZKind::A, ZKind::B, ZKind::C})
      for (std::int64_t n = 1; n <= 12; ++n)
        for (std::int64_t m = 1; m <= 12; ++m)
          CHECK(ent(ZClass::lettered(x, n), ZClass::lettered(y, m)) == (strength(x) >= strength(y) && m % n == 0));
}

TEST_CASE("Z bottom classes") {
  for (const auto& c : z_classes(5)) {
    CHECK(ent(c, ZClass::equality()));
    CHECK(ent(c, ZClass::trivial(true)));
    if (c.z().lettered()) {
      CHECK_FALSE(ent(ZClass::equality(), c));
      CHECK_FALSE(ent(ZClass::trivial(false), c));
    }
  }
  CHECK(ent(ZClass::equality(), ZClass::trivial(false)));
  CHECK(ent(ZClass::trivial(true), ZClass::equality()));
}

TEST_CASE("Q Hasse diagram (exhaustive)") {
  auto cs = q_classes();
  // Strict order and its covering relation.
  auto strictly = [&](const DefClass& a, const DefClass& b) { return ent(a, b) && !ent(b, a); };
  std::set<std::pair<std::string, std::string>> covers;
  for (const auto& a : cs)
    for (const auto& b : cs) {
      if (!strictly(a, b)) continue;
      bool between = std::any_of(cs.begin(), cs.end(), [&](const DefClass& m) { return strictly(a, m) && strictly(m, b); });
      if (!between) covers.insert({to_string(a), to_string(b)});
    }
  std::set<std::pair<std::string, std::string>> expected = {
      {"order", "between"}, {"order", "cyclic"}, {"between", "separation"}, {"cyclic", "separation"},
      {"separation", "trivial(true)"}};
  CHECK(covers == expected);
  // Five distinct classes, pairwise non-equivalent.
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (i != j) CHECK_FALSE((ent(cs[i], cs[j]) && ent(cs[j], cs[i])));
  // Between and Cyclic incomparable.
  CHECK_FALSE(ent(cs[1], cs[2]));
  CHECK_FALSE(ent(cs[2], cs[1]));
}

TEST_CASE("partial order laws") {
  for (auto cs : {q_classes(), z_classes(6)}) {
    for (const auto& a : cs)
      for (const auto& b : cs) {
        if (ent(a, b) && ent(b, a) && a.structure() == Signature::QOrder) CHECK(a == b);
        if (ent(a, b) && ent(b, a) && a.structure() == Signature::ZSucc && a.z().lettered()) CHECK(a == b);
        for (const auto& c : cs)
          if (ent(a, b) && ent(b, c)) CHECK(ent(a, c));
      }
  }
}

TEST_CASE("join examples") {
  std::vector<DefClass> bc = {QClass::of(QKind::Between), QClass::of(QKind::Cyclic)};
  CHECK(join(bc) == DefClass(QClass::of(QKind::Order)));
  std::vector<DefClass> a46 = {ZClass::lettered(ZKind::A, 4), ZClass::lettered(ZKind::A, 6)};
  CHECK(join(a46) == DefClass(ZClass::lettered(ZKind::A, 2)));
  std::vector<DefClass> one = {ZClass::lettered(ZKind::B, 3)};
  CHECK(join(one) == one[0]);
  CHECK_THROWS_AS(join(std::vector<DefClass>{}), std::invalid_argument);
  CHECK_THROWS_AS(join(std::vector<DefClass>{QClass::of(QKind::Order), ZClass::equality()}), std::invalid_argument);
}

TEST_CASE("join is the least upper bound (exhaustive)") {
  for (auto cs : {q_classes(), z_classes(12)}) {
    for (const auto& a : cs)
      for (const auto& b : cs) {
        std::vector<DefClass> pair = {a, b};
        DefClass j = join(pair);
        INFO(to_string(a), " v ", to_string(b), " = ", to_string(j));
        CHECK(ent(j, a));
        CHECK(ent(j, b));
        for (const auto& u : cs)
          if (ent(u, a) && ent(u, b)) CHECK(ent(u, j));
      }
  }
}

TEST_CASE("Z entailment agrees with table invariance (exhaustive, n, m <= 4)") {
  for (auto x : {ZKind::A, ZKind::B, ZKind::C})
    for (std::int64_t n = 1; n <= 4; ++n)
      for (auto y : {ZKind::A, ZKind::B, ZKind::C})
        for (std::int64_t m = 1; m <= 4; ++m) {
          Formula target = canonical_formula_z(ZClass::lettered(y, m));
          PatternTable t = pattern_table(target, free_vars(target));
          bool invariant = is_A_invariant(t, n);
          if (x == ZKind::B) invariant = invariant && flip_global(t);
          if (x == ZKind::C) invariant = invariant && flip_perline(t, n);
          INFO(n, " ", m);
          CHECK(ent(ZClass::lettered(x, n), ZClass::lettered(y, m)) == invariant);
        }
}

TEST_CASE("predicted preservation") {
  CHECK(predicted_preserved(QClass::of(QKind::Between), PermKind::QB));
  CHECK_FALSE(predicted_preserved(QClass::of(QKind::Order), PermKind::QB));
  CHECK_FALSE(predicted_preserved(QClass::of(QKind::Between), PermKind::QC));
  CHECK(predicted_preserved(QClass::of(QKind::Separation), PermKind::QS));
  CHECK(predicted_preserved(QClass::trivial(TrivialSub::EqualityOnly), PermKind::QS));
  CHECK(predicted_preserved(ZClass::lettered(ZKind::C, 2), PermKind::ZThird, 2));
  CHECK_FALSE(predicted_preserved(ZClass::lettered(ZKind::C, 2), PermKind::ZThird, 3));
  CHECK(predicted_preserved(ZClass::lettered(ZKind::A, 6), PermKind::ZFirst, 3));
  CHECK_FALSE(predicted_preserved(ZClass::lettered(ZKind::A, 2), PermKind::ZSecond, 2));
  for (const auto& c : z_classes(3)) CHECK(predicted_preserved(c, PermKind::Shift));
}
