#pragma once

#include <vector>

namespace polaron {

// Spherical Bessel function j_l(x), stable for l up to a few hundred
// (upward recurrence for x > l, downward Miller recurrence otherwise).
double spherical_jl(int l, double x);

// First n positive zeros of j_l, bracketed between consecutive zeros of
// j_{l-1} (interlacing) and bisected to ~1e-13 relative.
std::vector<double> spherical_bessel_zeros(int l, std::size_t n);

}  // namespace polaron
