#include "zomirror/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "zomirror/kernels.hpp"
#include "zomirror/mirror.hpp"

namespace zomirror {

namespace {

constexpr double kDivergenceCeiling = 1e12;
// labels outside the 1..T iteration range
constexpr std::uint64_t kIndexStream = 0x8000000000000052ull;     // R draw
constexpr std::uint64_t kDiagnosticStream = 0x8000000000000003ull;  // objective sampling for noisy f

bool all_finite(std::span<const double> v) {
    for (double e : v)
        if (!std::isfinite(e)) return false;
    return true;
}

void validate(const CompositeProblem& problem, const OptimizerConfig& cfg) {
    if (cfg.iterations < 1) throw std::invalid_argument("optimizer: iterations must be >= 1");
    if (cfg.algorithm == Algorithm::ZoAdaExpMd) {
        if (cfg.eta_const)
            throw std::invalid_argument("optimizer: ZoAdaExpMd forbids a constant stepsize");
    } else if (!cfg.eta_const || !(*cfg.eta_const > 0.0)) {
        throw std::invalid_argument("optimizer: this algorithm requires eta_const > 0");
    }
    if (cfg.estimator.scheme != scheme_of(cfg.algorithm))
        throw std::invalid_argument("optimizer: estimator scheme does not match the algorithm");
    if (!problem.f) throw std::invalid_argument("optimizer: problem has no objective");
}

Vec start_point(const CompositeProblem& problem) {
    if (problem.start) {
        if (problem.start->size() != problem.dim())
            throw std::invalid_argument("optimizer: start point has wrong dimension");
        if (!problem.feasible.contains(*problem.start))
            throw std::invalid_argument("optimizer: start point is infeasible");
        return *problem.start;
    }
    return problem.feasible.center(problem.dim());
}

double recorded_objective(const CompositeProblem& problem, std::span<const double> x,
                          RngStream diag_rng) {
    if (problem.f->has_exact_value()) return objective_value_exact(problem, x);
    const Noise xi = problem.f->draw_noise(diag_rng);
    return objective_value(problem, x, xi);
}

}  // namespace

Geometry geometry_of(Algorithm alg) {
    return alg == Algorithm::ZoPsgd ? Geometry::Euclidean : Geometry::EntropyMirror;
}

Scheme scheme_of(Algorithm alg) {
    return alg == Algorithm::ZoPsgd ? Scheme::Gaussian : Scheme::Rademacher;
}

const char* algorithm_name(Algorithm alg) {
    switch (alg) {
        case Algorithm::ZoExpMd: return "zo_expmd";
        case Algorithm::ZoAdaExpMd: return "zo_ada_expmd";
        case Algorithm::ZoPsgd: return "zo_psgd";
    }
    return "?";
}

double theory_eta(const SmoothnessInfo& info) {
    if (!info.grad_lipschitz || !info.l1_radius)
        throw std::invalid_argument("theory_eta: requires L and D");
    return *info.grad_lipschitz * (*info.l1_radius + 1.0);
}

RunTrace run(const CompositeProblem& problem, const OptimizerConfig& cfg) {
    validate(problem, cfg);
    const Geometry geom = geometry_of(cfg.algorithm);
    const bool adaptive = cfg.algorithm == Algorithm::ZoAdaExpMd;
    const int T = cfg.iterations;
    const auto& k = kern::ops();

    RngStream run_rng(cfg.seed, 0);
    const int R = static_cast<int>(run_rng.child(kIndexStream).below(static_cast<std::uint64_t>(T))) + 1;

    Vec x = start_point(problem);

    RunTrace trace;
    trace.records.reserve(T);
    trace.returned_index = R;
    trace.x_returned = x;

    trace.best_objective = recorded_objective(problem, x, run_rng.child(kDiagnosticStream));
    trace.x_best = x;

    AdaptiveState ada;
    long long calls = 0;

    for (int t = 1; t <= T; ++t) {
        const auto tick = std::chrono::steady_clock::now();
        if (t == R) trace.x_returned = x;

        RngStream it_rng = run_rng.child(static_cast<std::uint64_t>(t));
        const GradientEstimate est = estimate(*problem.f, x, cfg.estimator, it_rng);
        calls += est.oracle_calls;

        const double eta_t = adaptive ? ada.alpha : *cfg.eta_const;

        Vec xnext;
        try {
            xnext = generalized_projection(x, est.vector, eta_t, problem.h, problem.feasible, geom);
        } catch (const DivergedDualError&) {
            trace.status = RunStatus::Diverged;
            break;
        }

        const double fval = all_finite(xnext)
                                ? recorded_objective(problem, xnext, it_rng.child(kDiagnosticStream))
                                : std::numeric_limits<double>::quiet_NaN();
        if (!std::isfinite(fval) || std::fabs(fval) > kDivergenceCeiling) {
            trace.status = RunStatus::Diverged;
            break;
        }

        IterRecord rec;
        rec.iter = t;
        rec.oracle_calls = calls;
        rec.objective = fval;
        rec.eta = eta_t;
        rec.stationarity_sq = std::numeric_limits<double>::quiet_NaN();
        if (problem.f->has_exact_gradient()) {
            try {
                rec.stationarity_sq = stationarity(problem, xnext, eta_t, geom);
            } catch (const DivergedDualError&) {
                // iterate is finite but the exact-gradient prox overflows the
                // dual range; report the diagnostic as unavailable
            }
        }
        if (cfg.record_wallclock) {
            const auto tock = std::chrono::steady_clock::now();
            rec.wallclock_ms = std::chrono::duration<double, std::milli>(tock - tick).count();
        }
        trace.records.push_back(rec);

        if (adaptive) {
            const double lambda_t =
                2.0 / (std::max(k.l1_norm(x.data(), x.size()), k.l1_norm(xnext.data(), xnext.size())) +
                       1.0);
            const double move = k.l1_dist(x.data(), xnext.data(), x.size());
            ada.accumulator += lambda_t * lambda_t * ada.alpha * ada.alpha * move * move;
            ada.alpha = std::sqrt(ada.accumulator + 1.0);
        }

        if (fval < trace.best_objective) {
            trace.best_objective = fval;
            trace.x_best = xnext;
        }
        x = std::move(xnext);
    }

    trace.x_final = std::move(x);
    trace.oracle_calls_total = calls;
    return trace;
}

RunTrace run_zo_expmd(const CompositeProblem& problem, const OptimizerConfig& cfg) {
    if (cfg.algorithm != Algorithm::ZoExpMd)
        throw std::invalid_argument("run_zo_expmd: config targets a different algorithm");
    return run(problem, cfg);
}

RunTrace run_zo_ada_expmd(const CompositeProblem& problem, const OptimizerConfig& cfg) {
    if (cfg.algorithm != Algorithm::ZoAdaExpMd)
        throw std::invalid_argument("run_zo_ada_expmd: config targets a different algorithm");
    return run(problem, cfg);
}

RunTrace run_zo_psgd(const CompositeProblem& problem, const OptimizerConfig& cfg) {
    if (cfg.algorithm != Algorithm::ZoPsgd)
        throw std::invalid_argument("run_zo_psgd: config targets a different algorithm");
    return run(problem, cfg);
}

StationarityNorms stationarity_norms(const CompositeProblem& problem, std::span<const double> x,
                                     double eta, Geometry geom) {
    if (!problem.f->has_exact_gradient())
        throw std::logic_error("stationarity: problem exposes no exact gradient");
    Vec g(problem.dim());
    problem.f->exact_gradient(x, g);
    const Vec gm = gradient_map(x, g, eta, problem.h, problem.feasible, geom);
    const auto& k = kern::ops();
    StationarityNorms out;
    const double l1 = k.l1_norm(gm.data(), gm.size());
    out.l1_sq = l1 * l1;
    out.l2_sq = k.l2_norm_sq(gm.data(), gm.size());
    return out;
}

double stationarity(const CompositeProblem& problem, std::span<const double> x, double eta,
                    Geometry geom) {
    const StationarityNorms n = stationarity_norms(problem, x, eta, geom);
    return geom == Geometry::EntropyMirror ? n.l1_sq : n.l2_sq;
}

}  // namespace zomirror
