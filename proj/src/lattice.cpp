#include "deflat/lattice.hpp"

#include <numeric>
#include <stdexcept>

#include "deflat/qe_succ.hpp"

namespace deflat {

namespace {

// Which permutation kinds preserve a Q class, as a bit set: B, C, S, and
// "every permutation of Q". Definability runs against set inclusion.
constexpr unsigned kPresB = 1, kPresC = 2, kPresS = 4, kPresAll = 8;

unsigned preservers(const QClass& c) {
  switch (c.kind) {
    case QKind::Order: return 0;
    case QKind::Between: return kPresB;
    case QKind::Cyclic: return kPresC;
    case QKind::Separation: return kPresB | kPresC | kPresS;
    case QKind::Trivial: return kPresB | kPresC | kPresS | kPresAll;
  }
  return 0;
}

QClass from_preservers(unsigned mask) {
  switch (mask) {
    case 0: return QClass::of(QKind::Order);
    case kPresB: return QClass::of(QKind::Between);
    case kPresC: return QClass::of(QKind::Cyclic);
    case kPresB | kPresC | kPresS: return QClass::of(QKind::Separation);
    default: return QClass::trivial(TrivialSub::True);
  }
}

int strength(ZKind k) {
  switch (k) {
    case ZKind::A: return 3;
    case ZKind::B: return 2;
    case ZKind::C: return 1;
    default: return 0;
  }
}

void same_structure(const DefClass& a, const DefClass& b) {
  if (a.structure() != b.structure())
    throw std::invalid_argument("cannot compare a relation on Q with a relation on Z");
}

}  // namespace

std::string to_string(const DefClass& c) {
  return c.structure() == Signature::QOrder ? to_string(c.q()) : to_string(c.z());
}

std::string to_string(LatticeRule r) {
  switch (r) {
    case LatticeRule::Reflexive: return "reflexive";
    case LatticeRule::QPreservation: return "q-preservation";
    case LatticeRule::ZLetterDivisor: return "z-letter-divisor";
    case LatticeRule::ZLetteredOverBottom: return "z-lettered-over-equality";
    case LatticeRule::ZBottomUnderLettered: return "z-equality-under-lettered";
    case LatticeRule::ZBottom: return "z-equality-constants";
  }
  return "?";
}

Verdict entails_class(const DefClass& s, const DefClass& r) {
  same_structure(s, r);
  Verdict v;
  const std::string lhs = to_string(s), rhs = to_string(r);
  if (s == r) {
    v.holds = true;
    v.rule = LatticeRule::Reflexive;
    v.reason = lhs + " defines itself";
    return v;
  }
  if (s.structure() == Signature::QOrder) {
    unsigned ps = preservers(s.q()), pr = preservers(r.q());
    v.rule = LatticeRule::QPreservation;
    v.holds = (ps & ~pr) == 0;
    v.reason = v.holds ? "every permutation preserving " + lhs + " preserves " + rhs
                       : "some permutation preserves " + lhs + " but not " + rhs;
    return v;
  }
  const ZClass& a = s.z();
  const ZClass& b = r.z();
  if (a.lettered() && b.lettered()) {
    v.rule = LatticeRule::ZLetterDivisor;
    bool letter_ok = strength(a.kind) >= strength(b.kind);
    bool divides = b.d % a.d == 0;
    v.holds = letter_ok && divides;
    v.reason = lhs + " vs " + rhs + ": letter " + (letter_ok ? "at least as strong" : "weaker") + ", " +
               std::to_string(a.d) + (divides ? " divides " : " does not divide ") + std::to_string(b.d);
    return v;
  }
  if (a.lettered()) {
    v.holds = true;
    v.rule = LatticeRule::ZLetteredOverBottom;
    v.reason = rhs + " uses equality only, definable from anything";
    return v;
  }
  if (b.lettered()) {
    v.holds = false;
    v.rule = LatticeRule::ZBottomUnderLettered;
    v.reason = lhs + " is preserved by every permutation, " + rhs + " is not";
    return v;
  }
  v.holds = true;
  v.rule = LatticeRule::ZBottom;
  v.reason = "equality and constants are definable from each other";
  return v;
}

DefClass join(std::span<const DefClass> cs) {
  if (cs.empty()) throw std::invalid_argument("join of an empty set");
  for (const auto& c : cs) same_structure(cs.front(), c);
  if (cs.front().structure() == Signature::QOrder) {
    unsigned mask = ~0U;
    bool any_equality = false;
    for (const auto& c : cs) {
      mask &= preservers(c.q());
      any_equality |= c.q().kind == QKind::Trivial && c.q().sub == TrivialSub::EqualityOnly;
    }
    QClass out = from_preservers(mask);
    if (out.kind == QKind::Trivial) out.sub = any_equality ? TrivialSub::EqualityOnly : cs.front().q().sub;
    return out;
  }
  std::optional<ZClass> best;
  bool any_equality = false;
  for (const auto& c : cs) {
    const ZClass& z = c.z();
    any_equality |= z.kind == ZKind::Equality;
    if (!z.lettered()) continue;
    if (!best) {
      best = z;
      continue;
    }
    if (strength(z.kind) > strength(best->kind)) best->kind = z.kind;
    best->d = std::gcd(best->d, z.d);
  }
  if (best) return *best;
  return any_equality ? ZClass::equality() : cs.front().z();
}

DefClass classify(const Formula& f, Signature sig, const VarOrder& vars, std::int64_t window) {
  check_signature(f, sig);
  const VarOrder args = vars.empty() ? free_vars(f) : vars;
  if (sig == Signature::QOrder) return classify_q(order_type_set(f, args));
  return classify_z(pattern_table(eliminate_succ(f), args, window));
}

Verdict entails_formulas(const Formula& s, const Formula& r, Signature sig) {
  DefClass cs = classify(s, sig);
  DefClass cr = classify(r, sig);
  Verdict v = entails_class(cs, cr);
  v.reason = "source is " + to_string(cs) + ", target is " + to_string(cr) + "; " + v.reason;
  return v;
}

bool predicted_preserved(const DefClass& c, PermKind kind, std::int64_t d) {
  if (kind == PermKind::Shift) return true;
  if (c.structure() == Signature::QOrder) {
    if (!is_q_kind(kind)) throw std::invalid_argument("permutation kind " + to_string(kind) + " acts on Z, not Q");
    QKind generated = kind == PermKind::QB ? QKind::Between : kind == PermKind::QC ? QKind::Cyclic : QKind::Separation;
    return entails_class(QClass::of(generated), c).holds;
  }
  if (!is_z_kind(kind)) throw std::invalid_argument("permutation kind " + to_string(kind) + " acts on Q, not Z");
  if (d < 1) throw std::invalid_argument("permutation step must be >= 1");
  ZKind generated = kind == PermKind::ZFirst ? ZKind::A : kind == PermKind::ZSecond ? ZKind::B : ZKind::C;
  return entails_class(ZClass::lettered(generated, d), c).holds;
}

}  // namespace deflat
