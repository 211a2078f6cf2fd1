#pragma once

#include "deflat/formula.hpp"

namespace deflat {

// Quantifier elimination in dense linear orders without endpoints. The result
// is quantifier-free over {<, =} on the free variables of f.
Formula eliminate_dlo(const Formula& f);

}  // namespace deflat
