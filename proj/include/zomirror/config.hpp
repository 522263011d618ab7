#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zomirror/explain.hpp"
#include "zomirror/optimizer.hpp"

namespace zomirror {

// Configuration problem: the message names the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProblemSpec {
    enum class Kind { SparseQuadratic, Explain };
    Kind kind = Kind::SparseQuadratic;

    // sparse_quadratic
    std::size_t d = 50;
    std::size_t s = 5;
    double noise_std = 0.0;
    std::uint64_t problem_seed = 1;

    // explain
    std::int32_t cls_input = 64;
    std::int32_t cls_hidden = 32;
    std::int32_t cls_classes = 2;
    std::int32_t cls_seed = 7;
    std::optional<std::string> classifier_file;
    ExplainTask::Kind task = ExplainTask::Kind::PN;
    std::uint64_t sample_seed = 3;
    double kappa = 0.0;

    double gamma1 = 0.0;
    double gamma2 = 0.0;

    CompositeProblem build() const;
};

struct AlgorithmSpec {
    Algorithm algorithm = Algorithm::ZoExpMd;
    int iterations = 100;
    std::optional<double> eta;  // required for zo_expmd / zo_psgd
    int batch = 200;
    std::optional<double> nu;   // defaults to the scheme's fixed-batch formula

    OptimizerConfig resolve(const CompositeProblem& problem, std::uint64_t seed,
                            bool record_wallclock) const;
    std::string label() const;
};

struct ExperimentConfig {
    ProblemSpec problem;
    std::vector<AlgorithmSpec> algorithms;
    std::vector<std::uint64_t> seeds;
    std::string output_dir = "out";
    std::string report_norm = "both";  // "l1" | "l2" | "both"
    int threads = 1;
    bool record_wallclock = false;

    static ExperimentConfig from_file(const std::filesystem::path& path);
    static ExperimentConfig from_json_text(const std::string& text, const std::string& origin);

    // canonical key=value rendering used for the config hash
    std::string canonical() const;
};

}  // namespace zomirror
