#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deflat/formula.hpp"

namespace deflat {

// A tuple of Z x S up to shifts: which galaxy each position lives in and its
// coordinate inside the galaxy. Differences across galaxies are infinite.
struct DiffPattern {
  std::vector<int> galaxy;
  std::vector<std::int64_t> offset;

  std::size_t arity() const { return galaxy.size(); }
  // a_i - a_j, or nullopt for infinity.
  std::optional<std::int64_t> diff(std::size_t i, std::size_t j) const;
  int galaxies() const;

  auto operator<=>(const DiffPattern&) const = default;
};

std::string to_string(const DiffPattern& p);

// Galaxies renumbered by least member position, minimum offset 0 in each.
DiffPattern canonicalize(DiffPattern p);

// Splits every galaxy wherever two consecutive sorted offsets are more than
// `window` apart, then canonicalizes.
DiffPattern split_wide_gaps(const DiffPattern& p, std::int64_t window);

// Canonical patterns of arity n whose consecutive in-galaxy gaps are <= window.
std::vector<DiffPattern> enumerate_patterns(std::size_t n, std::int64_t window);

// Finite semantics of a quantifier-free relation of width <= window. Entries
// cover every pattern from enumerate_patterns(arity, window); lookups of other
// patterns go through split_wide_gaps.
class PatternTable {
 public:
  // Throws std::invalid_argument unless values has exactly the enumerated domain.
  PatternTable(std::size_t arity, std::int64_t window, std::map<DiffPattern, bool> values);

  std::size_t arity() const { return arity_; }
  std::int64_t window() const { return window_; }
  const std::map<DiffPattern, bool>& values() const { return values_; }
  std::size_t true_count() const;

  bool at(const DiffPattern& p) const;

 private:
  std::size_t arity_;
  std::int64_t window_;
  std::map<DiffPattern, bool> values_;
};

// window 0 selects width(f). Throws std::invalid_argument if f has quantifiers,
// mentions a variable outside vars, or window < width(f).
PatternTable pattern_table(const Formula& quantifier_free, const VarOrder& vars, std::int64_t window = 0);

bool m_indistinguishable(const DiffPattern& a, const DiffPattern& b, std::int64_t m);

// Splits each galaxy into its residue classes mod m, exact offsets kept.
DiffPattern reduce_pattern(const DiffPattern& p, std::int64_t m);

// Each set of co-located positions becomes its own galaxy.
DiffPattern colocation_pattern(const DiffPattern& p);

// Negates offsets in the galaxies selected by mask (bit g for galaxy g).
DiffPattern reflect_galaxies(const DiffPattern& p, std::uint64_t mask);

bool is_A_invariant(const PatternTable& t, std::int64_t m);
bool flip_global(const PatternTable& t);
bool flip_perline(const PatternTable& t, std::int64_t d);

// Entries with a gap of exactly window() must agree with the split pattern.
bool is_stable(const PatternTable& t);

enum class ZKind { Trivial, Equality, A, B, C };

struct ZClass {
  ZKind kind = ZKind::Trivial;
  bool truth = true;     // Trivial only
  std::int64_t d = 0;    // A, B, C only

  static ZClass trivial(bool v) { return {ZKind::Trivial, v, 0}; }
  static ZClass equality() { return {ZKind::Equality, true, 0}; }
  static ZClass lettered(ZKind k, std::int64_t d) { return {k, true, d}; }
  bool lettered() const { return kind == ZKind::A || kind == ZKind::B || kind == ZKind::C; }

  friend bool operator==(const ZClass& a, const ZClass& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == ZKind::Trivial) return a.truth == b.truth;
    return !a.lettered() || a.d == b.d;
  }
};

std::string to_string(const ZClass& c);

// Throws std::domain_error for a table that violates is_stable.
ZClass classify_z(const PatternTable& t);

// Sends every finite difference that is not a multiple of d to infinity.
// Throws std::invalid_argument if d < 1.
DiffPattern normalize_vector(const PatternTable& t, const DiffPattern& p, std::int64_t d);

Formula canonical_formula_z(const ZClass& c);

}  // namespace deflat
