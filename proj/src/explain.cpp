#include "zomirror/explain.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "zomirror/kernels.hpp"

namespace zomirror {

namespace {

thread_local Vec tl_hidden;

std::int32_t runner_up(std::span<const double> logits, std::int32_t k0) {
    std::int32_t best = -1;
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(logits.size()); ++i) {
        if (i == k0) continue;
        if (best < 0 || logits[i] > logits[best]) best = i;
    }
    return best;
}

void check_class(const TinyClassifier& m, std::int32_t k0) {
    if (k0 < 0 || k0 >= m.num_classes) throw std::invalid_argument("class index out of range");
}

template <typename T>
void write_pod(std::ofstream& out, const T* data, std::size_t count) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
}

template <typename T>
void read_pod(std::ifstream& in, T* data, std::size_t count) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
    if (!in) throw std::runtime_error("classifier fixture: truncated file");
}

}  // namespace

TinyClassifier TinyClassifier::generate(std::int32_t input_dim, std::int32_t hidden_dim,
                                        std::int32_t num_classes, std::int32_t seed) {
    if (input_dim < 1 || hidden_dim < 1 || hidden_dim > 32 || num_classes < 2)
        throw std::invalid_argument("classifier: bad shape (hidden <= 32, classes >= 2)");
    TinyClassifier m;
    m.input_dim = input_dim;
    m.hidden_dim = hidden_dim;
    m.num_classes = num_classes;
    m.seed = seed;
    RngStream rng(static_cast<std::uint64_t>(seed), 0x7c1a);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    m.w1.resize(static_cast<std::size_t>(hidden_dim) * input_dim);
    m.b1.resize(hidden_dim);
    m.w2.resize(static_cast<std::size_t>(num_classes) * hidden_dim);
    m.b2.resize(num_classes);
    for (auto& w : m.w1) w = rng.gaussian() * s1;
    for (auto& b : m.b1) b = 0.1 * rng.gaussian();
    for (auto& w : m.w2) w = rng.gaussian() * s2;
    for (auto& b : m.b2) b = 0.1 * rng.gaussian();
    return m;
}

Vec TinyClassifier::forward(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(input_dim))
        throw std::invalid_argument("classifier: dimension mismatch");
    const auto& k = kern::ops();
    auto& h = tl_hidden;
    h.resize(hidden_dim);
    k.matvec(w1.data(), hidden_dim, input_dim, x.data(), h.data());
    for (std::int32_t i = 0; i < hidden_dim; ++i) h[i] = std::tanh(h[i] + b1[i]);
    Vec logits(num_classes);
    k.matvec(w2.data(), num_classes, hidden_dim, h.data(), logits.data());
    for (std::int32_t i = 0; i < num_classes; ++i) logits[i] += b2[i];
    return logits;
}

std::int32_t TinyClassifier::predict(std::span<const double> x) const {
    const Vec logits = forward(x);
    std::int32_t best = 0;
    for (std::int32_t i = 1; i < num_classes; ++i)
        if (logits[i] > logits[best]) best = i;
    return best;
}

void TinyClassifier::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("classifier fixture: cannot open for writing: " + file.string());
    const std::int32_t header[4] = {input_dim, hidden_dim, num_classes, seed};
    write_pod(out, header, 4);
    write_pod(out, w1.data(), w1.size());
    write_pod(out, b1.data(), b1.size());
    write_pod(out, w2.data(), w2.size());
    write_pod(out, b2.data(), b2.size());
    if (!out) throw std::runtime_error("classifier fixture: write failed: " + file.string());
}

TinyClassifier TinyClassifier::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("classifier fixture: cannot open: " + file.string());
    std::int32_t header[4];
    read_pod(in, header, 4);
    TinyClassifier m;
    m.input_dim = header[0];
    m.hidden_dim = header[1];
    m.num_classes = header[2];
    m.seed = header[3];
    if (m.input_dim < 1 || m.hidden_dim < 1 || m.num_classes < 2)
        throw std::runtime_error("classifier fixture: malformed header");
    m.w1.resize(static_cast<std::size_t>(m.hidden_dim) * m.input_dim);
    m.b1.resize(m.hidden_dim);
    m.w2.resize(static_cast<std::size_t>(m.num_classes) * m.hidden_dim);
    m.b2.resize(m.num_classes);
    read_pod(in, m.w1.data(), m.w1.size());
    read_pod(in, m.b1.data(), m.b1.size());
    read_pod(in, m.w2.data(), m.w2.size());
    read_pod(in, m.b2.data(), m.b2.size());
    return m;
}

double pp_loss(const TinyClassifier& model, std::span<const double> x, std::int32_t k0, double kappa) {
    check_class(model, k0);
    const Vec logits = model.forward(x);
    const std::int32_t r = runner_up(logits, k0);
    return std::max(logits[r] - logits[k0], -kappa);
}

double pn_loss(const TinyClassifier& model, std::span<const double> x, std::span<const double> x0,
               std::int32_t k0, double kappa) {
    check_class(model, k0);
    if (x.size() != x0.size()) throw std::invalid_argument("pn_loss: dimension mismatch with x0");
    Vec point(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) point[i] = x0[i] + x[i];
    const Vec logits = model.forward(point);
    const std::int32_t r = runner_up(logits, k0);
    return std::max(logits[k0] - logits[r], -kappa);
}

namespace {

class ExplainObjective final : public Objective {
public:
    ExplainObjective(TinyClassifier model, Vec x0, ExplainTask::Kind kind, std::int32_t k0,
                     double kappa)
        : model_(std::move(model)), x0_(std::move(x0)), kind_(kind), k0_(k0), kappa_(kappa) {}

    std::size_t dim() const override { return x0_.size(); }
    double eval(std::span<const double> x, const Noise&) const override { return exact_value(x); }
    bool has_exact_value() const override { return true; }
    double exact_value(std::span<const double> x) const override {
        return kind_ == ExplainTask::Kind::PP ? pp_loss(model_, x, k0_, kappa_)
                                              : pn_loss(model_, x, x0_, k0_, kappa_);
    }

private:
    TinyClassifier model_;
    Vec x0_;
    ExplainTask::Kind kind_;
    std::int32_t k0_;
    double kappa_;
};

}  // namespace

CompositeProblem make_explain_problem(const ExplainTask& task, const TinyClassifier& model) {
    if (task.x0.size() != static_cast<std::size_t>(model.input_dim))
        throw std::invalid_argument("explain: sample dimension does not match the classifier");
    for (double v : task.x0)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("explain: x0 must lie in [0,1]^n");
    if (task.kappa < 0.0) throw std::invalid_argument("explain: kappa must be nonnegative");

    const std::int32_t k0 = model.predict(task.x0);
    const std::size_t n = task.x0.size();

    Vec lo(n, 0.0), hi(n);
    if (task.kind == ExplainTask::Kind::PP) {
        for (std::size_t i = 0; i < n; ++i) hi[i] = task.x0[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) hi[i] = 1.0 - task.x0[i];
    }

    CompositeProblem p;
    p.f = std::make_shared<ExplainObjective>(model, task.x0, task.kind, k0, task.kappa);
    p.h = Regularizer::elastic_net(task.gamma1, task.gamma2);
    p.feasible = FeasibleSet::box(std::move(lo), std::move(hi));
    p.start = task.kind == ExplainTask::Kind::PP ? task.x0 : p.feasible.center(n);
    return p;
}

}  // namespace zomirror
