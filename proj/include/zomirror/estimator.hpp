#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "zomirror/core.hpp"

namespace zomirror {

enum class Scheme { Rademacher, Gaussian };

struct EstimatorConfig {
    Scheme scheme = Scheme::Rademacher;
    double nu = 1e-3;  // smoothing radius, > 0
    int batch = 1;     // mini-batch size m, >= 1
};

struct GradientEstimate {
    Vec vector;
    long long oracle_calls = 0;  // always 2 * batch for two-point schemes
    double nu_used = 0.0;
    int batch_used = 0;
};

// Oracle failure surfaced with the number of evaluations completed so far.
struct OracleFailure : std::runtime_error {
    OracleFailure(const std::string& what, long long calls) : std::runtime_error(what), calls_completed(calls) {}
    long long calls_completed;
};

// Two-point mini-batch estimator g = (1/(m nu)) sum_j (f(x + nu u_j; xi_j) - f(x; xi_j)) u_j.
// Directions have i.i.d. +-1 coordinates; both evaluations of a pair share
// xi_j. Direction and noise draws come from separate sub-streams, and
// per-sample randomness is keyed by the sample index, so the result does not
// depend on evaluation order. The batch average is a pairwise tree sum.
GradientEstimate estimate_rademacher(const Objective& f, std::span<const double> x,
                                     const EstimatorConfig& cfg, RngStream& rng);

// Same two-point structure with standard normal directions (ZO-PSGD baseline).
GradientEstimate estimate_gaussian(const Objective& f, std::span<const double> x,
                                   const EstimatorConfig& cfg, RngStream& rng);

GradientEstimate estimate(const Objective& f, std::span<const double> x, const EstimatorConfig& cfg,
                          RngStream& rng);

// Parameter settings m = ceil(2 T e (2 ln d - 1)), nu = 1/(d sqrt(T)).
struct BudgetedParams {
    long long batch;
    double nu;
};
BudgetedParams budgeted_params(std::size_t d, long long T);

// Fixed-batch smoothing radius nu = m^{-1/2} sqrt(2 e (2 ln d - 1)) / d.
double rademacher_nu_fixed_batch(std::size_t d, long long m);

// Gaussian-smoothing default nu = m^{-1/2} d^{-1/2}.
double gaussian_nu_fixed_batch(std::size_t d, long long m);

// Empirical check of the mini-batch l-inf variance contraction: draws
// mean-zero vectors with ||X||_inf = sigma (scaled Rademacher coordinates),
// estimates E||mean - mu||_inf^2 over `trials` batches and returns it next to
// the e (2 ln d - 1) sigma^2 / m bound (sigma = 1).
struct VarianceProbe {
    double empirical;
    double bound;
};
VarianceProbe minibatch_variance_probe(std::size_t d, int m, int trials, RngStream rng);

}  // namespace zomirror
