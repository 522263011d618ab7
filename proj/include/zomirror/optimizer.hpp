#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "zomirror/core.hpp"
#include "zomirror/estimator.hpp"
#include "zomirror/prox.hpp"

namespace zomirror {

enum class Algorithm { ZoExpMd, ZoAdaExpMd, ZoPsgd };

struct OptimizerConfig {
    Algorithm algorithm = Algorithm::ZoExpMd;
    int iterations = 100;                   // T
    std::optional<double> eta_const;        // required for ZoExpMd/ZoPsgd, forbidden for ZoAdaExpMd
    EstimatorConfig estimator;
    std::uint64_t seed = 0;
    bool record_wallclock = false;          // off by default so traces replay byte-identically
};

// Adaptive-stepsize accumulator: alpha = sqrt(S + 1) with
// S = sum_s lambda_s^2 alpha_s^2 ||x_{s+1} - x_s||_1^2.
struct AdaptiveState {
    double accumulator = 0.0;  // S, nondecreasing
    double alpha = 1.0;        // sqrt(S + 1) >= 1
};

struct IterRecord {
    int iter = 0;
    long long oracle_calls = 0;   // cumulative, = 2*m*iter
    double objective = 0.0;       // F at the updated iterate
    double stationarity_sq = 0.0; // NaN when no exact gradient is available
    double eta = 0.0;
    double wallclock_ms = 0.0;
};

enum class RunStatus { Ok, Diverged };

struct RunTrace {
    std::vector<IterRecord> records;  // one per completed iteration (== T unless diverged)
    int returned_index = 0;           // R, uniform on {1..T}
    Vec x_returned;                   // x_R
    Vec x_best;                       // lowest recorded objective
    double best_objective = 0.0;
    Vec x_final;
    RunStatus status = RunStatus::Ok;
    long long oracle_calls_total = 0;
};

RunTrace run(const CompositeProblem& problem, const OptimizerConfig& cfg);
RunTrace run_zo_expmd(const CompositeProblem& problem, const OptimizerConfig& cfg);
RunTrace run_zo_ada_expmd(const CompositeProblem& problem, const OptimizerConfig& cfg);
RunTrace run_zo_psgd(const CompositeProblem& problem, const OptimizerConfig& cfg);

// ||G_K(x, grad f(x), eta)||^2 with the exact gradient; squared l1 norm under
// the mirror geometry, squared l2 under the Euclidean baseline.
double stationarity(const CompositeProblem& problem, std::span<const double> x, double eta,
                    Geometry geom);
struct StationarityNorms {
    double l1_sq;
    double l2_sq;
};
StationarityNorms stationarity_norms(const CompositeProblem& problem, std::span<const double> x,
                                     double eta, Geometry geom);

// Constant-stepsize setting eta = L (D + 1); requires both constants.
double theory_eta(const SmoothnessInfo& info);

Geometry geometry_of(Algorithm alg);
Scheme scheme_of(Algorithm alg);
const char* algorithm_name(Algorithm alg);

}  // namespace zomirror
