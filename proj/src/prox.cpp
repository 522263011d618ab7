#include "zomirror/prox.hpp"

#include <cmath>
#include <limits>

#include "zomirror/kernels.hpp"
#include "zomirror/mirror.hpp"

namespace zomirror {

double lambert_w0(double z) {
    if (!(z >= 0.0)) throw std::invalid_argument("lambert_w0: argument must be nonnegative");
    if (z == 0.0) return 0.0;
    double w = z < 1e-2 ? z - z * z : std::log1p(z);
    for (int it = 0; it < 50; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - z;
        const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        const double step = f / denom;
        w -= step;
        if (std::fabs(step) < 1e-14 * (1.0 + std::fabs(w))) break;
    }
    return w;
}

double lambert_w0_of_exp(double ell) {
    if (!(ell >= 1.0)) throw std::invalid_argument("lambert_w0_of_exp: requires ell >= 1");
    double w = ell - std::log(ell);
    for (int it = 0; it < 64; ++it) {
        const double g = w + std::log(w) - ell;
        const double step = w * g / (w + 1.0);
        w -= step;
        if (std::fabs(step) < 1e-15 * w) break;
    }
    return w;
}

Vec entropy_prox_unconstrained(std::span<const double> y, double gamma1, double gamma2, double eta,
                               std::size_t d) {
    if (!(eta > 0.0)) throw std::invalid_argument("entropy prox: eta must be positive");
    if (gamma1 < 0.0 || gamma2 < 0.0) throw std::invalid_argument("entropy prox: negative weight");
    const auto dl = static_cast<long double>(d);
    const double thr = gamma1 / eta;
    const double b = gamma2 / eta;
    const double a = 1.0 / static_cast<double>(d);
    Vec x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i])) throw std::invalid_argument("entropy prox: non-finite input");
        const long double t = log1pl(dl * fabsl(static_cast<long double>(y[i])));
        if (static_cast<double>(t) <= thr) {
            x[i] = 0.0;
            continue;
        }
        double mag;
        if (gamma2 == 0.0) {
            mag = static_cast<double>(expm1l(t - static_cast<long double>(thr)) / dl);
        } else {
            const double c = thr - static_cast<double>(t);
            const double ell = std::log(a * b) + (a * b - c);
            const double w = ell > 690.0 ? lambert_w0_of_exp(ell) : lambert_w0(std::exp(ell));
            mag = std::max(0.0, w / b - a);
        }
        x[i] = y[i] > 0.0 ? mag : -mag;
    }
    return x;
}

namespace {

Vec euclidean_prox(std::span<const double> anchor, std::span<const double> g, double eta,
                   const Regularizer& reg) {
    const std::size_t n = anchor.size();
    Vec z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = 2.0 * eta * anchor[i] - g[i];
    Vec x(n);
    kern::ops().soft_threshold(x.data(), z.data(), reg.gamma1, 1.0 / (reg.gamma2 + 2.0 * eta), n);
    return x;
}

}  // namespace

Vec generalized_projection(const ProxRequest& req) {
    const std::size_t n = req.anchor.size();
    if (req.gradient.size() != n)
        throw std::invalid_argument("generalized_projection: dimension mismatch");
    if (!(req.eta > 0.0)) throw std::invalid_argument("generalized_projection: eta must be positive");
    if (req.feasible && !req.feasible->contains(req.anchor))
        throw std::invalid_argument("generalized_projection: anchor is infeasible");

    Vec x;
    if (req.geometry == Geometry::EntropyMirror) {
        DualVec theta = mirror_map(req.anchor);
        const auto inv_eta = static_cast<long double>(1.0 / req.eta);
        for (std::size_t i = 0; i < n; ++i)
            theta[i] -= static_cast<long double>(req.gradient[i]) * inv_eta;
        const Vec y = inverse_mirror_map(theta);
        x = entropy_prox_unconstrained(y, req.reg.gamma1, req.reg.gamma2, req.eta, n);
    } else {
        x = euclidean_prox(req.anchor, req.gradient, req.eta, req.reg);
    }
    if (req.feasible) req.feasible->clamp(x, x);
    return x;
}

Vec generalized_projection(std::span<const double> anchor, std::span<const double> g, double eta,
                           const Regularizer& reg, const FeasibleSet& set, Geometry geom) {
    ProxRequest req;
    req.anchor = anchor;
    req.gradient = g;
    req.eta = eta;
    req.reg = reg;
    req.feasible = &set;
    req.geometry = geom;
    return generalized_projection(req);
}

Vec gradient_map(const ProxRequest& req) {
    Vec p = generalized_projection(req);
    Vec gm(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) gm[i] = req.eta * (req.anchor[i] - p[i]);
    return gm;
}

Vec gradient_map(std::span<const double> x, std::span<const double> g, double eta,
                 const Regularizer& reg, const FeasibleSet& set, Geometry geom) {
    ProxRequest req;
    req.anchor = x;
    req.gradient = g;
    req.eta = eta;
    req.reg = reg;
    req.feasible = &set;
    req.geometry = geom;
    return gradient_map(req);
}

}  // namespace zomirror
