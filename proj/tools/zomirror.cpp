#include <CLI11.hpp>

#include "zomirror/cli.hpp"
#include "zomirror/kernels.hpp"

int main(int argc, char** argv) {
    CLI::App app{"zomirror - zeroth-order mirror-descent optimization toolkit"};
    app.require_subcommand(1);

    std::string kernels = "auto";
    app.add_option("--kernels", kernels, "kernel variant: auto | scalar | avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    // run
    auto* run_cmd = app.add_subcommand("run", "execute the experiment described by a config file");
    std::string config_path;
    zomirror::cli::RunOverrides run_ov;
    std::uint64_t seed_opt = 0;
    run_cmd->add_option("config", config_path, "JSON experiment config")->required();
    auto* seed_flag = run_cmd->add_option("--seed", seed_opt, "replace the config's seed list");
    run_cmd->add_option("--threads", [&run_ov](auto& vals) {
        run_ov.threads = std::stoi(vals[0]);
        return true;
    }, "worker pool size");
    run_cmd->add_flag("--timings", run_ov.timings,
                      "record real wallclock per iteration (breaks byte-identical replays)");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the empirical property checks");
    std::vector<std::string> only;
    verify_cmd->add_option("--only", only,
                           "subset of {mirror, prox, estimator, lemma4, lemma5, lemma6}");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "stepsize-grid comparison suites");
    std::string suite;
    std::string bench_out = "bench_out";
    zomirror::cli::BenchOverrides bench_ov;
    bench_cmd->add_option("suite", suite, "quadratic | explain")->required();
    bench_cmd->add_option("--out", bench_out, "output directory");
    bench_cmd->add_option("-T,--iterations", [&bench_ov](auto& vals) {
        bench_ov.iterations = std::stoi(vals[0]);
        return true;
    }, "iteration budget per run");
    bench_cmd->add_option("-m,--batch", [&bench_ov](auto& vals) {
        bench_ov.batch = std::stoi(vals[0]);
        return true;
    }, "mini-batch size");
    bench_cmd->add_option("--seeds", [&bench_ov](auto& vals) {
        bench_ov.n_seeds = std::stoi(vals[0]);
        return true;
    }, "number of seeds (1..n)");
    bench_cmd->add_option("--threads", [&bench_ov](auto& vals) {
        bench_ov.threads = std::stoi(vals[0]);
        return true;
    }, "worker pool size");

    // chart
    auto* chart_cmd = app.add_subcommand("chart", "emit a minimal SVG line chart for a trace CSV");
    std::string chart_csv, chart_svg;
    chart_cmd->add_option("csv", chart_csv, "input CSV")->required();
    chart_cmd->add_option("--out", chart_svg, "output SVG path");

    // make-classifier
    auto* mk_cmd = app.add_subcommand("make-classifier", "write a classifier weight fixture");
    int mk_n = 64, mk_hidden = 32, mk_classes = 2, mk_seed = 7;
    std::string mk_out = "fixtures/classifier.bin";
    mk_cmd->add_option("--n", mk_n, "input dimension");
    mk_cmd->add_option("--hidden", mk_hidden, "hidden units (<= 32)");
    mk_cmd->add_option("--classes", mk_classes, "output classes");
    mk_cmd->add_option("--seed", mk_seed, "weight seed");
    mk_cmd->add_option("--out", mk_out, "output file")->required();

    CLI11_PARSE(app, argc, argv);

    if (!zomirror::kern::select(kernels)) {
        std::fprintf(stderr, "zomirror: kernel variant '%s' is not available on this machine\n",
                     kernels.c_str());
        return zomirror::cli::kConfigError;
    }

    if (run_cmd->parsed()) {
        if (seed_flag->count()) run_ov.seed = seed_opt;
        return zomirror::cli::cmd_run(config_path, run_ov);
    }
    if (verify_cmd->parsed()) return zomirror::cli::cmd_verify(only);
    if (bench_cmd->parsed()) return zomirror::cli::cmd_bench(suite, bench_out, bench_ov);
    if (chart_cmd->parsed()) {
        std::string out = chart_svg.empty() ? chart_csv + ".svg" : chart_svg;
        return zomirror::cli::cmd_chart(chart_csv, out);
    }
    if (mk_cmd->parsed())
        return zomirror::cli::cmd_make_classifier(mk_n, mk_hidden, mk_classes, mk_seed, mk_out);
    return zomirror::cli::kConfigError;
}
