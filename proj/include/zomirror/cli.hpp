#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace zomirror::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kCheckFailure = 2;
inline constexpr int kDiverged = 3;

struct RunOverrides {
    std::optional<std::uint64_t> seed;  // replaces the config's seed list
    std::optional<int> threads;
    bool timings = false;  // record real per-iteration wallclock in the CSV
};

int cmd_run(const std::filesystem::path& config_path, const RunOverrides& overrides);

int cmd_verify(const std::vector<std::string>& only);

struct BenchOverrides {
    std::optional<int> iterations;
    std::optional<int> batch;
    std::optional<int> n_seeds;
    std::optional<int> threads;
};

int cmd_bench(const std::string& suite, const std::filesystem::path& out_dir,
              const BenchOverrides& overrides);

// Minimal self-contained SVG line chart of the objective column of a trace CSV.
int cmd_chart(const std::filesystem::path& csv_path, const std::filesystem::path& svg_path);

int cmd_make_classifier(int n, int hidden, int classes, int seed,
                        const std::filesystem::path& out_path);

}  // namespace zomirror::cli
