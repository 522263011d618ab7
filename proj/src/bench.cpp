#include "zomirror/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace zomirror {

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void run_parallel(std::vector<std::function<void()>> jobs, int threads) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
    if (threads == 1) {
        for (auto& j : jobs) j();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs.size()) return;
                jobs[i]();
            }
        });
    for (auto& th : pool) th.join();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GridConfig {
    Algorithm algorithm;
    std::optional<double> eta;
};

std::vector<GridConfig> grid_configs() {
    std::vector<GridConfig> configs;
    for (int i = 1; i <= 5; ++i)
        configs.push_back({Algorithm::ZoExpMd, std::pow(10.0, i)});
    for (int i = 1; i <= 5; ++i)
        configs.push_back({Algorithm::ZoPsgd, std::pow(10.0, i)});
    configs.push_back({Algorithm::ZoAdaExpMd, std::nullopt});
    return configs;
}

ProblemSpec suite_problem(const std::string& suite, const BenchOptions& opts) {
    ProblemSpec spec;
    if (suite == "quadratic") {
        spec.kind = ProblemSpec::Kind::SparseQuadratic;
        spec.d = opts.dim;
        spec.s = opts.sparsity;
        spec.noise_std = opts.noise_std;
        spec.problem_seed = opts.problem_seed;
    } else if (suite == "explain") {
        spec.kind = ProblemSpec::Kind::Explain;
        spec.cls_input = opts.cls_input;
        spec.cls_seed = opts.cls_seed;
        spec.sample_seed = opts.sample_seed;
        spec.task = ExplainTask::Kind::PN;
    } else {
        throw std::invalid_argument("unknown bench suite '" + suite + "' (quadratic | explain)");
    }
    spec.gamma1 = opts.gamma1;
    spec.gamma2 = opts.gamma2;
    return spec;
}

std::string grid_label(const GridConfig& gc) {
    std::string label = algorithm_name(gc.algorithm);
    if (gc.eta) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "_eta%g", *gc.eta);
        label += buf;
    }
    return label;
}

}  // namespace

BenchReport run_bench_suite(const std::string& suite, const BenchOptions& opts) {
    const ProblemSpec spec = suite_problem(suite, opts);
    const CompositeProblem problem = spec.build();
    const std::vector<GridConfig> configs = grid_configs();
    const std::size_t n_seeds = opts.seeds.size();

    std::vector<RunTrace> traces(configs.size() * n_seeds);
    std::vector<std::function<void()>> jobs;
    jobs.reserve(traces.size());
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        for (std::size_t si = 0; si < n_seeds; ++si) {
            jobs.emplace_back([&, ci, si] {
                OptimizerConfig cfg;
                cfg.algorithm = configs[ci].algorithm;
                cfg.iterations = opts.iterations;
                cfg.eta_const = configs[ci].eta;
                cfg.seed = opts.seeds[si];
                cfg.estimator.scheme = scheme_of(cfg.algorithm);
                cfg.estimator.batch = opts.batch;
                cfg.estimator.nu = cfg.estimator.scheme == Scheme::Rademacher
                                       ? rademacher_nu_fixed_batch(problem.dim(), opts.batch)
                                       : gaussian_nu_fixed_batch(problem.dim(), opts.batch);
                traces[ci * n_seeds + si] = run(problem, cfg);
            });
        }
    }
    run_parallel(std::move(jobs), opts.threads);

    BenchReport report;
    report.suite = suite;
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        BenchEntry entry;
        entry.algorithm = algorithm_name(configs[ci].algorithm);
        entry.eta = configs[ci].eta;
        entry.label = grid_label(configs[ci]);

        std::vector<double> finals, bests;
        entry.median_curve.resize(opts.iterations);
        for (int t = 0; t < opts.iterations; ++t) {
            std::vector<double> column;
            column.reserve(n_seeds);
            for (std::size_t si = 0; si < n_seeds; ++si) {
                const RunTrace& tr = traces[ci * n_seeds + si];
                column.push_back(t < static_cast<int>(tr.records.size())
                                     ? tr.records[t].objective
                                     : kInf);
            }
            entry.median_curve[t] = median(std::move(column));
        }
        for (std::size_t si = 0; si < n_seeds; ++si) {
            const RunTrace& tr = traces[ci * n_seeds + si];
            if (tr.status == RunStatus::Diverged || tr.records.empty()) {
                ++entry.diverged;
                finals.push_back(kInf);
            } else {
                finals.push_back(tr.records.back().objective);
            }
            bests.push_back(tr.best_objective);
        }
        entry.median_final_objective = median(std::move(finals));
        entry.median_best_objective = median(std::move(bests));
        report.entries.push_back(std::move(entry));
    }
    std::stable_sort(report.entries.begin(), report.entries.end(),
                     [](const BenchEntry& a, const BenchEntry& b) {
                         return a.median_final_objective < b.median_final_objective;
                     });
    return report;
}

ParityResult adaptive_parity(const BenchReport& report) {
    ParityResult out;
    out.adaptive_median = kInf;
    out.best_grid_median = kInf;
    for (const BenchEntry& e : report.entries) {
        if (e.algorithm == "zo_ada_expmd") {
            out.adaptive_median = e.median_final_objective;
        } else if (e.algorithm == "zo_expmd" && e.median_final_objective < out.best_grid_median) {
            out.best_grid_median = e.median_final_objective;
            out.best_grid_label = e.label;
        }
    }
    return out;
}

TrendPoint convergence_trend(std::size_t d, std::size_t s, int T, int m,
                             const std::vector<std::uint64_t>& seeds, int threads) {
    const CompositeProblem problem =
        make_sparse_quadratic(d, s, 0.0, RngStream(1, 0x9d), Regularizer::elastic_net(0.1, 0.1));
    const double eta_expmd = theory_eta(problem.smoothness);
    const double eta_psgd = *problem.smoothness.grad_lipschitz;

    struct Outcome {
        double l1 = kInf, l2 = kInf;
    };
    std::vector<Outcome> expmd(seeds.size()), psgd(seeds.size());
    std::vector<std::function<void()>> jobs;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
        jobs.emplace_back([&, si] {
            OptimizerConfig cfg;
            cfg.algorithm = Algorithm::ZoExpMd;
            cfg.iterations = T;
            cfg.eta_const = eta_expmd;
            cfg.seed = seeds[si];
            cfg.estimator = {Scheme::Rademacher, rademacher_nu_fixed_batch(d, m), m};
            const RunTrace tr = run(problem, cfg);
            const auto n = stationarity_norms(problem, tr.x_final, eta_expmd, Geometry::EntropyMirror);
            expmd[si] = {n.l1_sq, n.l2_sq};
        });
        jobs.emplace_back([&, si] {
            OptimizerConfig cfg;
            cfg.algorithm = Algorithm::ZoPsgd;
            cfg.iterations = T;
            cfg.eta_const = eta_psgd;
            cfg.seed = seeds[si];
            cfg.estimator = {Scheme::Gaussian, gaussian_nu_fixed_batch(d, m), m};
            const RunTrace tr = run(problem, cfg);
            const auto n = stationarity_norms(problem, tr.x_final, eta_psgd, Geometry::Euclidean);
            psgd[si] = {n.l1_sq, n.l2_sq};
        });
    }
    run_parallel(std::move(jobs), threads);

    auto collect = [](const std::vector<Outcome>& v, bool l1) {
        std::vector<double> vals;
        vals.reserve(v.size());
        for (const auto& o : v) vals.push_back(l1 ? o.l1 : o.l2);
        return median(std::move(vals));
    };
    TrendPoint tp;
    tp.expmd_l1 = collect(expmd, true);
    tp.expmd_l2 = collect(expmd, false);
    tp.psgd_l1 = collect(psgd, true);
    tp.psgd_l2 = collect(psgd, false);
    return tp;
}

}  // namespace zomirror
