#pragma once

#include <span>

#include "zomirror/core.hpp"

namespace zomirror {

enum class Geometry { EntropyMirror, Euclidean };

// Arguments of the generalized projection P_K(x, g, eta) under a composite
// objective <g, x> + h(x) + eta * B(x; anchor).
struct ProxRequest {
    std::span<const double> anchor;    // current iterate, must be feasible
    std::span<const double> gradient;  // gradient estimate
    double eta = 1.0;                  // stepsize coefficient, > 0
    Regularizer reg;
    const FeasibleSet* feasible = nullptr;  // null means all of R^d
    Geometry geometry = Geometry::EntropyMirror;
};

// Principal branch of w e^w = z on z >= 0, Halley iteration, residual
// |w e^w - z| <= 1e-10 * max(1, z). Rejects negative z.
double lambert_w0(double z);

// W0(exp(ell)) for ell large enough that exp(ell) overflows; solves
// w + ln w = ell by Newton. Requires ell >= 1.
double lambert_w0_of_exp(double ell);

// Second stage of the two-step mirror update: coordinate-wise minimizer of
// h(x) + eta * B_phi(x; y) over R^d given the intermediate point y.
// Zero when ln(d|y_i|+1) <= gamma1/eta; otherwise the Lambert-W closed form
// (gamma2 > 0) or the pure-l1 closed form (gamma2 == 0).
Vec entropy_prox_unconstrained(std::span<const double> y, double gamma1, double gamma2, double eta,
                               std::size_t d);

// argmin_{x in K} <g, x> + h(x) + eta * B(x; anchor). EntropyMirror uses the
// entropy potential's Bregman divergence; Euclidean uses eta*||x - anchor||_2^2
// (no 1/2 factor, so the unconstrained h==0 minimizer is anchor - g/(2 eta)).
// Coordinate solutions are clamped into the box.
Vec generalized_projection(const ProxRequest& req);
Vec generalized_projection(std::span<const double> anchor, std::span<const double> g, double eta,
                           const Regularizer& reg, const FeasibleSet& set, Geometry geom);

// G_K(x, g, eta) = eta * (x - P_K(x, g, eta))
Vec gradient_map(const ProxRequest& req);
Vec gradient_map(std::span<const double> x, std::span<const double> g, double eta,
                 const Regularizer& reg, const FeasibleSet& set, Geometry geom);

}  // namespace zomirror
