#pragma once

#include <cstdint>

#include "deflat/formula.hpp"

namespace deflat {

// Quantifier elimination for <Z, successor>. The result uses only atoms
// v = w + k and is equivalent over Z and over Z x S.
Formula eliminate_succ(const Formula& f);

// max |k| over atoms, plus one. Any two tuples that agree on every difference
// below this bound get the same truth value. Throws std::invalid_argument if
// f has quantifiers.
std::int64_t width(const Formula& quantifier_free);

}  // namespace deflat
