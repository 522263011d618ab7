#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zomirror/config.hpp"
#include "zomirror/optimizer.hpp"

namespace zomirror {

struct BenchOptions {
    int iterations = 300;
    int batch = 200;  // fixed mini-batch across all candidates
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    int threads = 0;  // 0 = hardware concurrency

    // quadratic suite
    std::size_t dim = 1000;
    std::size_t sparsity = 10;
    double noise_std = 0.0;
    double gamma1 = 0.1;
    double gamma2 = 0.1;
    std::uint64_t problem_seed = 1;

    // explain suite
    std::int32_t cls_input = 64;
    std::int32_t cls_seed = 7;
    std::uint64_t sample_seed = 3;
};

struct BenchEntry {
    std::string algorithm;
    std::optional<double> eta;  // unset for the adaptive method
    double median_final_objective = 0.0;
    double median_best_objective = 0.0;  // lowest objective seen along the run
    std::vector<double> median_curve;  // per-iteration median objective across seeds
    int diverged = 0;
    std::string label;
};

struct BenchReport {
    std::string suite;
    std::vector<BenchEntry> entries;  // sorted by median final objective
};

// The stepsize-grid comparison: ZO-ExpMD and ZO-PSGD over eta in
// {10^1..10^5} plus ZO-AdaExpMD, all at the same mini-batch size.
BenchReport run_bench_suite(const std::string& suite, const BenchOptions& opts);

// Median final objective of the adaptive run against the best constant
// grid entry of ZO-ExpMD.
struct ParityResult {
    double adaptive_median = 0.0;
    double best_grid_median = 0.0;
    std::string best_grid_label;
};
ParityResult adaptive_parity(const BenchReport& report);

// Theory-stepsize head-to-head of ZO-ExpMD and ZO-PSGD at an equal oracle
// budget; medians of the final exact-gradient stationarity over seeds, in
// both squared norms.
struct TrendPoint {
    double expmd_l1 = 0.0, expmd_l2 = 0.0;
    double psgd_l1 = 0.0, psgd_l2 = 0.0;
};
TrendPoint convergence_trend(std::size_t d, std::size_t s, int T, int m,
                             const std::vector<std::uint64_t>& seeds, int threads);

double median(std::vector<double> values);

// Runs jobs on a pool of `threads` workers (0 = hardware concurrency).
void run_parallel(std::vector<std::function<void()>> jobs, int threads);

}  // namespace zomirror
