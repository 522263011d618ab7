#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "zomirror/core.hpp"

// Entropy-like potential phi(x) = sum_i ((|x_i| + 1/d) ln(d|x_i| + 1) - |x_i|),
// its gradient (the mirror map), the inverse map and the Bregman divergence.
// Dual coordinates carry extended precision: the inverse map amplifies
// dual-space rounding by a factor of d|x_i|+1, and double-width duals would
// cap the primal round-trip accuracy near 1e-9 ulps at |x_i| ~ 1e6.

namespace zomirror {

using DualVec = std::vector<long double>;

// Diverged dual iterate: exp(|theta_i|) would overflow the primal range.
struct DivergedDualError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// phi(x) >= 0, phi(0) = 0; d is taken from x.size()
double potential(std::span<const double> x);

// theta_i = ln(d|x_i| + 1) sgn(x_i)
DualVec mirror_map(std::span<const double> x);

// x_i = (exp(|theta_i|) - 1)/d * sgn(theta_i); throws DivergedDualError on overflow
Vec inverse_mirror_map(const DualVec& theta);

// B_phi(x; y) = phi(x) - phi(y) - <grad phi(y), x - y>; nonnegative, zero iff x == y
double bregman(std::span<const double> x, std::span<const double> y);

namespace detail {
// |x| below this is treated as exactly zero so signed zeros cannot leak
// through sgn.
inline constexpr double kSignFloor = 1e-300;
long double potential_l(std::span<const double> x);
}  // namespace detail

}  // namespace zomirror
