#include "zomirror/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "zomirror/bench.hpp"
#include "zomirror/config.hpp"
#include "zomirror/trace_io.hpp"
#include "zomirror/verify.hpp"

namespace zomirror::cli {

namespace {

using nlohmann::json;

std::string run_filename(const AlgorithmSpec& alg, std::uint64_t seed) {
    return alg.label() + "_seed" + std::to_string(seed) + ".csv";
}

json trace_summary(const CompositeProblem& problem, const AlgorithmSpec& alg, std::uint64_t seed,
                   const RunTrace& trace, const std::string& csv_name,
                   const std::string& report_norm) {
    json j;
    j["algorithm"] = algorithm_name(alg.algorithm);
    if (alg.eta) j["eta"] = *alg.eta;
    j["seed"] = seed;
    j["csv"] = csv_name;
    j["status"] = trace.status == RunStatus::Ok ? "ok" : "diverged";
    j["iterations_completed"] = trace.records.size();
    j["returned_index"] = trace.returned_index;
    j["best_objective"] = trace.best_objective;
    if (!trace.records.empty()) j["final_objective"] = trace.records.back().objective;
    j["oracle_calls"] = trace.oracle_calls_total;
    if (trace.status == RunStatus::Ok && !trace.records.empty() &&
        problem.f->has_exact_gradient()) {
        try {
            const StationarityNorms n =
                stationarity_norms(problem, trace.x_final, trace.records.back().eta,
                                   geometry_of(alg.algorithm));
            if (report_norm != "l2") j["final_stationarity_l1_sq"] = n.l1_sq;
            if (report_norm != "l1") j["final_stationarity_l2_sq"] = n.l2_sq;
        } catch (const std::exception&) {
            // diagnostics only; a dual-range overflow here is not a run failure
        }
    }
    return j;
}

}  // namespace

int cmd_run(const std::filesystem::path& config_path, const RunOverrides& overrides) {
    ExperimentConfig cfg;
    try {
        cfg = ExperimentConfig::from_file(config_path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "zomirror run: %s\n", e.what());
        return kConfigError;
    }
    if (overrides.seed) cfg.seeds = {*overrides.seed};
    if (const char* env = std::getenv("ZOMIRROR_SEED")) cfg.seeds = {std::strtoull(env, nullptr, 10)};
    if (overrides.threads) cfg.threads = *overrides.threads;
    cfg.record_wallclock = overrides.timings;

    CompositeProblem problem;
    try {
        problem = cfg.problem.build();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "zomirror run: building problem failed: %s\n", e.what());
        return kConfigError;
    }

    const std::filesystem::path out_dir(cfg.output_dir);
    struct Slot {
        const AlgorithmSpec* alg;
        std::uint64_t seed;
        RunTrace trace;
        std::string error;
    };
    std::vector<Slot> slots;
    for (const auto& alg : cfg.algorithms)
        for (auto seed : cfg.seeds) slots.push_back({&alg, seed, {}, {}});

    std::vector<std::function<void()>> jobs;
    for (auto& slot : slots)
        jobs.emplace_back([&cfg, &problem, &slot] {
            try {
                const OptimizerConfig ocfg =
                    slot.alg->resolve(problem, slot.seed, cfg.record_wallclock);
                slot.trace = run(problem, ocfg);
            } catch (const std::exception& e) {
                slot.error = e.what();
            }
        });
    run_parallel(std::move(jobs), cfg.threads);

    json summary;
    summary["config_hash"] = fnv1a_hex(cfg.canonical());
    summary["runs"] = json::array();
    bool any_diverged = false;
    for (auto& slot : slots) {
        if (!slot.error.empty()) {
            std::fprintf(stderr, "zomirror run: %s seed=%llu failed: %s\n", slot.alg->label().c_str(),
                         static_cast<unsigned long long>(slot.seed), slot.error.c_str());
            return kConfigError;
        }
        const std::string csv_name = run_filename(*slot.alg, slot.seed);
        write_file_atomic(out_dir / csv_name, trace_to_csv(slot.trace));
        summary["runs"].push_back(
            trace_summary(problem, *slot.alg, slot.seed, slot.trace, csv_name, cfg.report_norm));
        if (slot.trace.status == RunStatus::Diverged) {
            any_diverged = true;
            std::fprintf(stderr, "zomirror run: %s seed=%llu diverged after %zu iterations\n",
                         slot.alg->label().c_str(), static_cast<unsigned long long>(slot.seed),
                         slot.trace.records.size());
        }
    }
    write_file_atomic(out_dir / "summary.json", summary.dump(2) + "\n");
    std::printf("wrote %zu trace(s) to %s\n", slots.size(), out_dir.string().c_str());
    return any_diverged ? kDiverged : kOk;
}

int cmd_verify(const std::vector<std::string>& only) {
    std::vector<CheckResult> results;
    try {
        results = run_verify(only);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "zomirror verify: %s\n", e.what());
        return kConfigError;
    }
    int failures = 0;
    for (const auto& r : results) {
        std::printf("%-44s empirical=%-14.6g bound=%-14.6g %s\n", r.name.c_str(), r.empirical, r.bound,
                    r.pass ? "PASS" : "FAIL");
        if (!r.note.empty()) std::printf("%-44s   %s\n", "", r.note.c_str());
        if (!r.pass) ++failures;
    }
    std::printf("%d/%zu checks passed\n", static_cast<int>(results.size()) - failures, results.size());
    return failures == 0 ? kOk : kCheckFailure;
}

int cmd_bench(const std::string& suite, const std::filesystem::path& out_dir,
              const BenchOverrides& overrides) {
    BenchOptions opts;
    if (suite == "explain") opts.iterations = 150;
    if (overrides.iterations) opts.iterations = *overrides.iterations;
    if (overrides.batch) opts.batch = *overrides.batch;
    if (overrides.threads) opts.threads = *overrides.threads;
    if (overrides.n_seeds) {
        opts.seeds.clear();
        for (int i = 1; i <= *overrides.n_seeds; ++i) opts.seeds.push_back(i);
    }

    BenchReport report;
    try {
        report = run_bench_suite(suite, opts);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "zomirror bench: %s\n", e.what());
        return kConfigError;
    }

    std::printf("suite %s: T=%d m=%d seeds=%zu\n", suite.c_str(), opts.iterations, opts.batch,
                opts.seeds.size());
    std::printf("%-24s %-12s %-16s %-16s %s\n", "algorithm", "eta", "median final F",
                "median best F", "diverged");
    std::ostringstream ranking;
    ranking << "algorithm,eta,median_final_F,median_best_F,diverged\n";
    for (const auto& e : report.entries) {
        const std::string eta = e.eta ? std::to_string(*e.eta) : "adaptive";
        std::printf("%-24s %-12s %-16.8g %-16.8g %d\n", e.algorithm.c_str(), eta.c_str(),
                    e.median_final_objective, e.median_best_objective, e.diverged);
        ranking << e.algorithm << ',' << eta << ',';
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", e.median_final_objective);
        ranking << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", e.median_best_objective);
        ranking << buf << ',' << e.diverged << '\n';

        std::ostringstream curve;
        curve << "iter,median_F\n";
        for (std::size_t t = 0; t < e.median_curve.size(); ++t) {
            std::snprintf(buf, sizeof(buf), "%.17g", e.median_curve[t]);
            curve << (t + 1) << ',' << buf << '\n';
        }
        write_file_atomic(out_dir / (suite + "_" + e.label + "_median.csv"), curve.str());
    }
    write_file_atomic(out_dir / (suite + "_ranking.csv"), ranking.str());

    const ParityResult parity = adaptive_parity(report);
    std::printf("adaptive median %.8g vs best grid (%s) %.8g\n", parity.adaptive_median,
                parity.best_grid_label.c_str(), parity.best_grid_median);
    return kOk;
}

int cmd_chart(const std::filesystem::path& csv_path, const std::filesystem::path& svg_path) {
    std::ifstream in(csv_path);
    if (!in) {
        std::fprintf(stderr, "zomirror chart: cannot open %s\n", csv_path.string().c_str());
        return kConfigError;
    }
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> values;
    while (std::getline(in, line)) {
        // objective is the third column of a trace CSV, second of a curve CSV
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cols.push_back(cell);
        if (cols.size() >= 3)
            values.push_back(std::strtod(cols[2].c_str(), nullptr));
        else if (cols.size() == 2)
            values.push_back(std::strtod(cols[1].c_str(), nullptr));
    }
    if (values.empty()) {
        std::fprintf(stderr, "zomirror chart: no data rows in %s\n", csv_path.string().c_str());
        return kConfigError;
    }
    double lo = values[0], hi = values[0];
    for (double v : values) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi <= lo) hi = lo + 1.0;

    constexpr int w = 720, h = 360, pad = 40;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<polyline fill=\"none\" "
           "stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double x = pad + (w - 2.0 * pad) * static_cast<double>(i) /
                                   std::max<std::size_t>(1, values.size() - 1);
        const double vv = std::isfinite(values[i]) ? values[i] : hi;
        const double y = h - pad - (h - 2.0 * pad) * (vv - lo) / (hi - lo);
        svg << x << ',' << y << ' ';
    }
    svg << "\"/>\n<text x=\"" << pad << "\" y=\"16\" font-size=\"12\">" << csv_path.filename().string()
        << " (min " << lo << ", max " << hi << ")</text>\n</svg>\n";
    write_file_atomic(svg_path, svg.str());
    std::printf("wrote %s\n", svg_path.string().c_str());
    return kOk;
}

int cmd_make_classifier(int n, int hidden, int classes, int seed,
                        const std::filesystem::path& out_path) {
    try {
        const TinyClassifier model = TinyClassifier::generate(n, hidden, classes, seed);
        if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
        model.save(out_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "zomirror make-classifier: %s\n", e.what());
        return kConfigError;
    }
    std::printf("wrote %s\n", out_path.string().c_str());
    return kOk;
}

}  // namespace zomirror::cli
