#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "deflat/formula.hpp"
#include "deflat/perm.hpp"
#include "deflat/reltype_z.hpp"

namespace deflat {

// Ground truth for both structures, written without reference to the
// quantifier-elimination code it is used to check.

using Rational = boost::multiprecision::cpp_rational;

// A point of Z x S.
struct ZPoint {
  std::int64_t galaxy = 0;
  std::int64_t offset = 0;
  auto operator<=>(const ZPoint&) const = default;
};

std::string to_string(const ZPoint& p);

// Exact truth in <Q, <>. Each quantifier ranges over the values in scope,
// the midpoints between neighbours, and one point beyond each end; no other
// value can realize a new order type. Throws std::invalid_argument if the
// point has the wrong length or a free variable is missing from vars.
bool eval_dlo(const Formula& f, const VarOrder& vars, std::span<const Rational> point);
bool eval_dlo(const Formula& f, std::span<const Rational> point);

// Exact truth in Z x S. A quantifier whose body has offsets up to K and q
// nested quantifiers ranges over the points within K*(q+1) of a value in
// scope plus one point in an unused galaxy; anything farther relates to the
// scope exactly like the fresh point.
bool eval_succ(const Formula& f, const VarOrder& vars, std::span<const ZPoint> point);
bool eval_succ(const Formula& f, const VarOrder& vars, const DiffPattern& p);
bool eval_succ(const Formula& f, const DiffPattern& p);

// Largest difference the relation defined by f can observe: K*(q+1) with K
// the largest offset and q the number of quantifiers.
std::int64_t reach_bound(const Formula& f);

// Exact equivalence: compares on every order type (Q) or every canonical
// pattern whose gaps cover both reach bounds (Z). The free variables of one
// side must include those of the other.
bool equiv_check(const Formula& f, const Formula& g, Signature sig);

// Order automorphism of a shuffled copy of Q, built one query at a time.
class LazyPermQ {
 public:
  LazyPermQ(PermKind kind, std::uint64_t seed);

  PermKind kind() const { return kind_; }
  Rational apply(const Rational& q);
  const std::map<Rational, Rational>& committed() const { return committed_; }
  // Whether q was placed below the cut (C and S kinds; false otherwise).
  bool below_cut(const Rational& q) const;

 private:
  using Key = std::pair<int, Rational>;
  Key key_of(const Rational& q);

  PermKind kind_;
  std::mt19937_64 rng_;
  Rational cut_lo_, cut_hi_;
  std::map<Rational, bool> side_;  // true = below the cut
  std::map<Key, Rational> by_key_;
  std::map<Rational, Rational> committed_;
};

// Permutation of Z x S moving whole galaxies (shift) or d-lines (first,
// second, third kinds) rigidly, built one line at a time.
class LazyPermZ {
 public:
  LazyPermZ(PermSpec spec, std::uint64_t seed);

  const PermSpec& spec() const { return spec_; }
  ZPoint apply(const ZPoint& p);
  const std::map<ZPoint, ZPoint>& committed() const { return committed_; }
  // Sign (+1 or -1) the line through p is mapped with; commits the line.
  int line_sign(const ZPoint& p);

 private:
  struct LineImage {
    std::int64_t galaxy;
    std::int64_t base;
    int sign;
  };
  std::pair<std::int64_t, std::int64_t> line_of(const ZPoint& p) const;
  const LineImage& line_image(const ZPoint& p);

  PermSpec spec_;
  std::mt19937_64 rng_;
  std::map<std::pair<std::int64_t, std::int64_t>, LineImage> lines_;
  std::map<std::pair<std::int64_t, std::int64_t>, bool> used_targets_;
  int positive_lines_ = 0, negative_lines_ = 0;
  std::map<ZPoint, ZPoint> committed_;
};

// Throws std::invalid_argument for a kind that does not act on the structure.
LazyPermQ lazy_perm_q(PermKind kind, std::uint64_t seed);
LazyPermZ lazy_perm_z(PermSpec spec, std::uint64_t seed);

struct ProbeReport {
  bool violated = false;
  std::size_t checked = 0;
  std::vector<std::string> tuple;  // counterexample, when violated
  std::vector<std::string> image;
  bool value_before = false;

  std::string summary() const;
};

// Samples tuples, maps them through perm, and compares truth values over the
// free variables of f in first-occurrence order.
ProbeReport invariance_probe(const Formula& f, LazyPermQ& perm, std::size_t samples, std::uint64_t seed);
ProbeReport invariance_probe(const Formula& f, LazyPermZ& perm, std::size_t samples, std::uint64_t seed);

}  // namespace deflat
