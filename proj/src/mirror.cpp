#include "zomirror/mirror.hpp"

#include <cmath>
#include <limits>

namespace zomirror {

namespace detail {

long double potential_l(std::span<const double> x) {
    const auto d = static_cast<long double>(x.size());
    long double sum = 0.0L;
    for (double xi : x) {
        const long double a = fabsl(static_cast<long double>(xi));
        if (a < kSignFloor) continue;
        sum += (a + 1.0L / d) * log1pl(d * a) - a;
    }
    return sum;
}

}  // namespace detail

double potential(std::span<const double> x) {
    for (double xi : x)
        if (!std::isfinite(xi)) throw std::invalid_argument("potential: non-finite input");
    return static_cast<double>(detail::potential_l(x));
}

DualVec mirror_map(std::span<const double> x) {
    const auto d = static_cast<long double>(x.size());
    DualVec theta(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw std::invalid_argument("mirror_map: non-finite input");
        const double xi = x[i];
        if (std::fabs(xi) < detail::kSignFloor) {
            theta[i] = 0.0L;
            continue;
        }
        const long double mag = log1pl(d * fabsl(static_cast<long double>(xi)));
        theta[i] = xi > 0.0 ? mag : -mag;
    }
    return theta;
}

Vec inverse_mirror_map(const DualVec& theta) {
    const auto d = static_cast<long double>(theta.size());
    // exp(|theta_i|) must stay within the primal (double) range
    const long double limit = logl(static_cast<long double>(std::numeric_limits<double>::max()) * d);
    Vec x(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const long double t = theta[i];
        if (!std::isfinite(static_cast<double>(t)))
            throw std::invalid_argument("inverse_mirror_map: non-finite input");
        const long double a = fabsl(t);
        if (a > limit) throw DivergedDualError("inverse_mirror_map: dual iterate diverged");
        if (a == 0.0L) {
            x[i] = 0.0;
            continue;
        }
        const long double mag = expm1l(a) / d;
        x[i] = static_cast<double>(t > 0.0L ? mag : -mag);
    }
    return x;
}

double bregman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("bregman: dimension mismatch");
    const DualVec grad_y = mirror_map(y);
    long double inner = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i)
        inner += grad_y[i] * (static_cast<long double>(x[i]) - static_cast<long double>(y[i]));
    const long double v = detail::potential_l(x) - detail::potential_l(y) - inner;
    return static_cast<double>(v);
}

}  // namespace zomirror
