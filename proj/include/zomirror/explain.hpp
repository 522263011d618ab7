#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "zomirror/core.hpp"

namespace zomirror {

// Fixed two-layer perceptron (tanh hidden layer) standing in for the black-box
// classifier. Weights are generated once from a seed and can be shipped as a
// binary fixture so golden values stay stable.
//
// Fixture layout, all little-endian: four int32 (input_dim, hidden_dim,
// num_classes, seed), then float64 arrays w1 (hidden x input, row-major),
// b1 (hidden), w2 (classes x hidden, row-major), b2 (classes).
struct TinyClassifier {
    std::int32_t input_dim = 0;
    std::int32_t hidden_dim = 0;
    std::int32_t num_classes = 0;
    std::int32_t seed = 0;
    Vec w1, b1, w2, b2;

    static TinyClassifier generate(std::int32_t input_dim, std::int32_t hidden_dim,
                                   std::int32_t num_classes, std::int32_t seed);
    static TinyClassifier load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;

    Vec forward(std::span<const double> x) const;  // logits
    std::int32_t predict(std::span<const double> x) const;  // argmax, ties to lowest index
};

struct ExplainTask {
    enum class Kind { PP, PN };
    Vec x0;               // the explained sample, entries in [0, 1]
    Kind kind = Kind::PN;
    double kappa = 0.0;   // margin floor, >= 0
    double gamma1 = 0.0;
    double gamma2 = 0.0;
};

// max{ max_{i != k0} f(x)_i - f(x)_{k0}, -kappa }
double pp_loss(const TinyClassifier& model, std::span<const double> x, std::int32_t k0, double kappa);

// max{ f(x0 + x)_{k0} - max_{i != k0} f(x0 + x)_i, -kappa }
double pn_loss(const TinyClassifier& model, std::span<const double> x, std::span<const double> x0,
               std::int32_t k0, double kappa);

// Wraps the PP/PN loss as a deterministic black-box oracle with the elastic
// net attached. Boxes: PP -> [0, x0_i] started at x0; PN -> [0, 1 - x0_i]
// started at the box center. k0 is frozen from f(x0) at construction.
CompositeProblem make_explain_problem(const ExplainTask& task, const TinyClassifier& model);

}  // namespace zomirror
