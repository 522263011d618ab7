#include "zomirror/estimator.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>

#include "zomirror/kernels.hpp"

namespace zomirror {

namespace {

constexpr std::uint64_t kDirectionStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr double kE = 2.718281828459045235360287471353;

void warn_nu_floor(double nu, double xinf) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
        std::fprintf(stderr,
                     "zomirror: smoothing radius %.3e is below 1e-8*(1+||x||_inf)=%.3e; "
                     "the two-point difference may lose all significant digits\n",
                     nu, 1e-8 * (1.0 + xinf));
}

struct SampleContext {
    const Objective* f;
    std::span<const double> x;
    double nu;
    Scheme scheme;
    RngStream dir_parent;
    RngStream noise_parent;
    std::atomic<long long>* calls;
};

// one per-sample estimate: (f(x + nu*u; xi) - f(x; xi)) / nu * u
Vec sample_estimate(const SampleContext& ctx, long long j) {
    const std::size_t n = ctx.x.size();
    RngStream dir_rng = ctx.dir_parent.child(static_cast<std::uint64_t>(j));
    Vec u(n);
    if (ctx.scheme == Scheme::Rademacher)
        for (auto& e : u) e = dir_rng.sign();
    else
        for (auto& e : u) e = dir_rng.gaussian();

    RngStream noise_rng = ctx.noise_parent.child(static_cast<std::uint64_t>(j));
    const Noise xi = ctx.f->draw_noise(noise_rng);

    Vec xp(n);
    kern::ops().axpy(xp.data(), ctx.x.data(), ctx.nu, u.data(), n);

    double f1 = 0.0, f0 = 0.0;
    try {
        f1 = ctx.f->eval(xp, xi);
        ctx.calls->fetch_add(1, std::memory_order_relaxed);
        f0 = ctx.f->eval(ctx.x, xi);
        ctx.calls->fetch_add(1, std::memory_order_relaxed);
    } catch (const std::exception& e) {
        throw OracleFailure(e.what(), ctx.calls->load(std::memory_order_relaxed));
    }

    const double scale = (f1 - f0) / ctx.nu;
    for (auto& e : u) e *= scale;
    return u;
}

// pairwise tree sum over samples [lo, hi); leaf order is fixed by the sample
// index, so the reduction is independent of any evaluation schedule
Vec tree_sum(const SampleContext& ctx, long long lo, long long hi) {
    if (hi - lo == 1) return sample_estimate(ctx, lo);
    const long long mid = lo + (hi - lo) / 2;
    Vec a = tree_sum(ctx, lo, mid);
    const Vec b = tree_sum(ctx, mid, hi);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

GradientEstimate run_two_point(const Objective& f, std::span<const double> x,
                               const EstimatorConfig& cfg, RngStream& rng) {
    if (x.size() != f.dim()) throw std::invalid_argument("estimator: dimension mismatch");
    if (!(cfg.nu > 0.0)) throw std::invalid_argument("estimator: nu must be positive");
    if (cfg.batch < 1) throw std::invalid_argument("estimator: batch must be >= 1");

    const double xinf = kern::ops().linf_norm(x.data(), x.size());
    if (cfg.nu < 1e-8 * (1.0 + xinf)) warn_nu_floor(cfg.nu, xinf);

    std::atomic<long long> calls{0};
    SampleContext ctx{&f,
                      x,
                      cfg.nu,
                      cfg.scheme,
                      rng.child(kDirectionStream),
                      rng.child(kNoiseStream),
                      &calls};

    Vec sum = tree_sum(ctx, 0, cfg.batch);
    const double inv_m = 1.0 / static_cast<double>(cfg.batch);
    for (auto& e : sum) e *= inv_m;

    GradientEstimate est;
    est.vector = std::move(sum);
    est.oracle_calls = calls.load();
    est.nu_used = cfg.nu;
    est.batch_used = cfg.batch;
    return est;
}

}  // namespace

GradientEstimate estimate_rademacher(const Objective& f, std::span<const double> x,
                                     const EstimatorConfig& cfg, RngStream& rng) {
    if (cfg.scheme != Scheme::Rademacher)
        throw std::invalid_argument("estimate_rademacher: config requests a different scheme");
    return run_two_point(f, x, cfg, rng);
}

GradientEstimate estimate_gaussian(const Objective& f, std::span<const double> x,
                                   const EstimatorConfig& cfg, RngStream& rng) {
    if (cfg.scheme != Scheme::Gaussian)
        throw std::invalid_argument("estimate_gaussian: config requests a different scheme");
    return run_two_point(f, x, cfg, rng);
}

GradientEstimate estimate(const Objective& f, std::span<const double> x, const EstimatorConfig& cfg,
                          RngStream& rng) {
    return run_two_point(f, x, cfg, rng);
}

BudgetedParams budgeted_params(std::size_t d, long long T) {
    if (d < 3) throw std::invalid_argument("budgeted_params: requires d >= 3");
    if (T < 1) throw std::invalid_argument("budgeted_params: requires T >= 1");
    const double dd = static_cast<double>(d);
    const double tt = static_cast<double>(T);
    BudgetedParams p;
    p.batch = static_cast<long long>(std::ceil(2.0 * tt * kE * (2.0 * std::log(dd) - 1.0)));
    p.nu = 1.0 / (dd * std::sqrt(tt));
    return p;
}

double rademacher_nu_fixed_batch(std::size_t d, long long m) {
    if (d < 3) throw std::invalid_argument("rademacher_nu_fixed_batch: requires d >= 3");
    if (m < 1) throw std::invalid_argument("rademacher_nu_fixed_batch: requires m >= 1");
    const double dd = static_cast<double>(d);
    return std::sqrt(2.0 * kE * (2.0 * std::log(dd) - 1.0)) /
           (std::sqrt(static_cast<double>(m)) * dd);
}

double gaussian_nu_fixed_batch(std::size_t d, long long m) {
    if (d < 1 || m < 1) throw std::invalid_argument("gaussian_nu_fixed_batch: bad arguments");
    return 1.0 / std::sqrt(static_cast<double>(m) * static_cast<double>(d));
}

VarianceProbe minibatch_variance_probe(std::size_t d, int m, int trials, RngStream rng) {
    if (d < 3) throw std::invalid_argument("variance probe: requires d >= 3");
    if (m < 1 || trials < 1) throw std::invalid_argument("variance probe: bad arguments");
    std::vector<int> sums(d);
    double acc = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        std::fill(sums.begin(), sums.end(), 0);
        for (int i = 0; i < m; ++i)
            for (std::size_t k = 0; k < d; ++k) sums[k] += rng.sign() > 0.0 ? 1 : -1;
        int worst = 0;
        for (std::size_t k = 0; k < d; ++k) worst = std::max(worst, sums[k] * sums[k]);
        acc += static_cast<double>(worst) / (static_cast<double>(m) * static_cast<double>(m));
    }
    VarianceProbe out;
    out.empirical = acc / trials;
    out.bound = kE * (2.0 * std::log(static_cast<double>(d)) - 1.0) / m;
    return out;
}

}  // namespace zomirror
