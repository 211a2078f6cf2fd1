#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "deflat/formula.hpp"
#include "deflat/perm.hpp"
#include "deflat/reltype_q.hpp"
#include "deflat/reltype_z.hpp"

namespace deflat {

// A classification verdict tagged with its structure.
class DefClass {
 public:
  DefClass(QClass c) : value_(c) {}  // NOLINT(google-explicit-constructor)
  DefClass(ZClass c) : value_(c) {}  // NOLINT(google-explicit-constructor)

  Signature structure() const { return std::holds_alternative<QClass>(value_) ? Signature::QOrder : Signature::ZSucc; }
  const QClass& q() const { return std::get<QClass>(value_); }
  const ZClass& z() const { return std::get<ZClass>(value_); }

  friend bool operator==(const DefClass& a, const DefClass& b) { return a.value_ == b.value_; }

 private:
  std::variant<QClass, ZClass> value_;
};

std::string to_string(const DefClass& c);

// The lattice law a verdict rests on.
enum class LatticeRule {
  Reflexive,         // X defines X
  QPreservation,     // comparison of the groups of B/C/S-type permutations preserving each side
  ZLetterDivisor,    // X(n) >= Y(m) iff letter(X) >= letter(Y) and n | m
  ZLetteredOverBottom,
  ZBottomUnderLettered,
  ZBottom,           // equality and constants are inter-definable
};

std::string to_string(LatticeRule r);

struct Verdict {
  bool holds = false;
  LatticeRule rule = LatticeRule::Reflexive;
  std::string reason;
};

// Whether r is definable from s. Throws std::invalid_argument when the two
// live on different structures.
Verdict entails_class(const DefClass& s, const DefClass& r);

// Least class defining every input. Throws std::invalid_argument on an empty
// list or mixed structures.
DefClass join(std::span<const DefClass> cs);

// Full pipeline: quantifier elimination, finite semantics, classifier.
// Empty vars means free_vars(f); window applies to Z only (0 = width).
DefClass classify(const Formula& f, Signature sig, const VarOrder& vars = {}, std::int64_t window = 0);

Verdict entails_formulas(const Formula& s, const Formula& r, Signature sig);

// Whether a permutation of the given kind (step d for Z kinds) preserves every
// relation in class c, as predicted by the lattice.
bool predicted_preserved(const DefClass& c, PermKind kind, std::int64_t d = 1);

}  // namespace deflat
