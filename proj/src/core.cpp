#include "zomirror/core.hpp"

#include <algorithm>
#include <cmath>

#include "zomirror/kernels.hpp"

namespace zomirror {

double Regularizer::value(std::span<const double> x) const {
    if (is_none()) return 0.0;
    const auto& k = kern::ops();
    double v = 0.0;
    if (gamma1 > 0.0) v += gamma1 * k.l1_norm(x.data(), x.size());
    if (gamma2 > 0.0) v += 0.5 * gamma2 * k.l2_norm_sq(x.data(), x.size());
    return v;
}

FeasibleSet FeasibleSet::box(Vec lo, Vec hi) {
    if (lo.size() != hi.size()) throw std::invalid_argument("box bounds differ in length");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] <= hi[i])) throw std::invalid_argument("box has lower_i > upper_i");
    FeasibleSet s;
    s.kind = Kind::Box;
    s.lower = std::move(lo);
    s.upper = std::move(hi);
    return s;
}

bool FeasibleSet::contains(std::span<const double> x, double tol) const {
    if (kind == Kind::All) return true;
    if (x.size() != lower.size()) throw std::invalid_argument("dimension mismatch in membership test");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
    return true;
}

void FeasibleSet::clamp(std::span<const double> x, std::span<double> out) const {
    if (kind == Kind::All) {
        std::copy(x.begin(), x.end(), out.begin());
        return;
    }
    if (x.size() != lower.size()) throw std::invalid_argument("dimension mismatch in clamp");
    kern::ops().clamp(out.data(), x.data(), lower.data(), upper.data(), x.size());
}

Vec FeasibleSet::center(std::size_t dim) const {
    Vec c(dim, 0.0);
    if (kind == Kind::Box) {
        for (std::size_t i = 0; i < dim; ++i) {
            if (std::isfinite(lower[i]) && std::isfinite(upper[i]))
                c[i] = 0.5 * (lower[i] + upper[i]);
            else
                c[i] = std::clamp(0.0, lower[i], upper[i]);
        }
    }
    return c;
}

double objective_value(const CompositeProblem& p, std::span<const double> x, const Noise& xi) {
    if (x.size() != p.dim()) throw std::invalid_argument("objective_value: dimension mismatch");
    return p.f->eval(x, xi) + p.h.value(x);
}

double objective_value_exact(const CompositeProblem& p, std::span<const double> x) {
    if (x.size() != p.dim()) throw std::invalid_argument("objective_value: dimension mismatch");
    return p.f->exact_value(x) + p.h.value(x);
}

// ---------------------------------------------------------------------------
// SparseQuadratic
// ---------------------------------------------------------------------------

namespace {
thread_local Vec tl_residual;
}  // namespace

SparseQuadratic::SparseQuadratic(std::size_t d, std::size_t s, double noise_std, RngStream rng)
    : d_(d), noise_std_(noise_std) {
    if (d < 3) throw std::invalid_argument("sparse quadratic requires d >= 3");
    if (s < 1 || s > d) throw std::invalid_argument("sparse quadratic requires 1 <= s <= d");
    if (noise_std < 0.0) throw std::invalid_argument("noise_std must be nonnegative");

    auto structure_rng = rng.child(1);
    auto value_rng = rng.child(2);
    auto planted_rng = rng.child(3);

    const std::size_t nnz_per_row = std::min<std::size_t>(d, std::max<std::size_t>(4, s));
    const double scale = 1.0 / std::sqrt(static_cast<double>(nnz_per_row));

    row_ptr_.resize(d + 1);
    col_.reserve(d * nnz_per_row);
    val_.reserve(d * nnz_per_row);
    std::vector<std::int32_t> cols(nnz_per_row);
    std::vector<bool> used(d, false);
    for (std::size_t r = 0; r < d; ++r) {
        row_ptr_[r] = static_cast<std::int32_t>(col_.size());
        for (std::size_t k = 0; k < nnz_per_row;) {
            const auto c = static_cast<std::int32_t>(structure_rng.below(d));
            if (used[c]) continue;
            used[c] = true;
            cols[k++] = c;
        }
        std::sort(cols.begin(), cols.end());
        for (auto c : cols) {
            used[c] = false;
            col_.push_back(c);
            val_.push_back(value_rng.gaussian() * scale);
        }
    }
    row_ptr_[d] = static_cast<std::int32_t>(col_.size());

    // planted s-sparse minimizer, b = A x*
    xstar_.assign(d, 0.0);
    std::size_t placed = 0;
    while (placed < s) {
        const auto i = planted_rng.below(d);
        if (xstar_[i] != 0.0) continue;
        double v = planted_rng.gaussian();
        if (std::fabs(v) < 0.1) v = std::copysign(0.1, v == 0.0 ? 1.0 : v);
        xstar_[i] = v;
        ++placed;
    }
    b_.assign(d, 0.0);
    apply(xstar_, b_);

    for (double v : val_) frob_ += v * v;
    frob_ = std::sqrt(frob_);

    // L = lambda_max(A^T A) by power iteration
    auto power_rng = rng.child(4);
    Vec v(d), av(d), atav(d);
    for (auto& e : v) e = power_rng.gaussian();
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        apply(v, av);
        apply_t(av, atav);
        const double nrm = std::sqrt(kern::ops().l2_norm_sq(atav.data(), d));
        if (nrm == 0.0) break;
        for (std::size_t i = 0; i < d; ++i) v[i] = atav[i] / nrm;
        const double next = nrm;  // Rayleigh quotient of the normalized iterate
        if (it > 10 && std::fabs(next - lambda) <= 1e-12 * std::max(1.0, next)) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lipschitz_ = lambda;
}

void SparseQuadratic::apply(std::span<const double> x, std::span<double> out) const {
    kern::ops().csr_matvec(row_ptr_.data(), col_.data(), val_.data(), d_, x.data(), out.data());
}

void SparseQuadratic::apply_t(std::span<const double> r, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t row = 0; row < d_; ++row) {
        const double rv = r[row];
        if (rv == 0.0) continue;
        for (std::int32_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) out[col_[k]] += val_[k] * rv;
    }
}

double SparseQuadratic::eval(std::span<const double> x, const Noise& xi) const {
    if (x.size() != d_) throw std::invalid_argument("sparse quadratic: dimension mismatch");
    if (!xi.values.empty() && xi.values.size() != d_)
        throw std::invalid_argument("sparse quadratic: noise realization has wrong length");
    auto& r = tl_residual;
    r.resize(d_);
    apply(x, r);
    double s = 0.0;
    if (xi.values.empty()) {
        for (std::size_t i = 0; i < d_; ++i) {
            const double e = r[i] - b_[i];
            s += e * e;
        }
    } else {
        for (std::size_t i = 0; i < d_; ++i) {
            const double e = r[i] - b_[i] + xi.values[i];
            s += e * e;
        }
    }
    return 0.5 * s;
}

Noise SparseQuadratic::draw_noise(RngStream& rng) const {
    if (noise_std_ == 0.0) return {};
    Noise xi;
    xi.values.resize(d_);
    for (auto& e : xi.values) e = noise_std_ * rng.gaussian();
    return xi;
}

double SparseQuadratic::exact_value(std::span<const double> x) const { return eval(x, Noise{}); }

void SparseQuadratic::exact_gradient(std::span<const double> x, std::span<double> g) const {
    if (x.size() != d_ || g.size() != d_)
        throw std::invalid_argument("sparse quadratic: dimension mismatch");
    auto& r = tl_residual;
    r.resize(d_);
    apply(x, r);
    for (std::size_t i = 0; i < d_; ++i) r[i] -= b_[i];
    apply_t(r, g);
}

void SparseQuadratic::stochastic_gradient(std::span<const double> x, const Noise& xi,
                                          std::span<double> g) const {
    auto& r = tl_residual;
    r.resize(d_);
    apply(x, r);
    for (std::size_t i = 0; i < d_; ++i) r[i] -= b_[i];
    if (!xi.values.empty())
        for (std::size_t i = 0; i < d_; ++i) r[i] += xi.values[i];
    apply_t(r, g);
}

CompositeProblem make_sparse_quadratic(std::size_t d, std::size_t s, double noise_std, RngStream rng,
                                       Regularizer h) {
    auto f = std::make_shared<SparseQuadratic>(d, s, noise_std, rng);
    CompositeProblem p;
    p.h = h;
    p.feasible = FeasibleSet::all();
    p.smoothness.grad_lipschitz = f->grad_lipschitz();
    p.smoothness.grad_noise_std = noise_std * f->frobenius_norm();
    // planted-minimizer l1 radius; feeds the eta = L(D+1) helper
    p.smoothness.l1_radius = kern::ops().l1_norm(f->planted_minimizer().data(), d);
    p.start = Vec(d, 0.0);
    p.f = std::move(f);
    return p;
}

}  // namespace zomirror
