#pragma once

#include "fracham/spectral.hpp"

namespace fracham::detail {

// Approximate Riesz map: exact A^{-1} for a constant potential, the
// multiplier preconditioner (|k| + mean V)^{-1} otherwise.
Field riesz(const HalfForm& form, const Field& r);

}  // namespace fracham::detail
