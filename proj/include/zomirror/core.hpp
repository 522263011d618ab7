#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "zomirror/rng.hpp"

namespace zomirror {

using Vec = std::vector<double>;

// One realization of the oracle noise, drawn once and reusable across
// evaluation points (both points of a two-point pair share it). Deterministic
// objectives carry an empty payload.
struct Noise {
    Vec values;
};

// Convex regularizer h(x) = gamma1*||x||_1 + gamma2/2*||x||_2^2.
struct Regularizer {
    double gamma1 = 0.0;
    double gamma2 = 0.0;

    static Regularizer none() { return {}; }
    static Regularizer elastic_net(double g1, double g2) {
        if (g1 < 0.0 || g2 < 0.0) throw std::invalid_argument("elastic net weights must be nonnegative");
        return {g1, g2};
    }

    bool is_none() const { return gamma1 == 0.0 && gamma2 == 0.0; }
    double value(std::span<const double> x) const;
};

// Feasible set: all of R^d, or a per-coordinate box (entries may be +-inf).
struct FeasibleSet {
    enum class Kind { All, Box };
    Kind kind = Kind::All;
    Vec lower;
    Vec upper;

    static FeasibleSet all() { return {}; }
    static FeasibleSet box(Vec lo, Vec hi);

    bool contains(std::span<const double> x, double tol = 0.0) const;
    void clamp(std::span<const double> x, std::span<double> out) const;
    // box midpoint (0 on unbounded coordinates); origin for Kind::All
    Vec center(std::size_t dim) const;
};

// Known problem constants; every entry is optional and only consumed by the
// algorithms that need it (the adaptive method runs with all of them unset).
struct SmoothnessInfo {
    std::optional<double> grad_lipschitz;   // L, w.r.t. ||.||_2
    std::optional<double> fn_lipschitz;     // G
    std::optional<double> grad_noise_std;   // sigma
    std::optional<double> value_bound;      // B (documentation only)
    std::optional<double> l1_radius;        // D
};

// Stochastic zeroth-order oracle f(x; xi). eval must be deterministic given
// (x, xi) and safe for concurrent calls.
class Objective {
public:
    virtual ~Objective() = default;
    virtual std::size_t dim() const = 0;
    virtual double eval(std::span<const double> x, const Noise& xi) const = 0;
    virtual Noise draw_noise(RngStream&) const { return {}; }

    virtual bool has_exact_gradient() const { return false; }
    virtual void exact_gradient(std::span<const double>, std::span<double>) const {
        throw std::logic_error("objective exposes no exact gradient");
    }
    virtual bool has_exact_value() const { return false; }
    virtual double exact_value(std::span<const double>) const {
        throw std::logic_error("objective exposes no exact value");
    }
};

struct CompositeProblem {
    std::shared_ptr<const Objective> f;
    Regularizer h;
    FeasibleSet feasible;
    SmoothnessInfo smoothness;
    std::optional<Vec> start;  // preferred initial iterate

    std::size_t dim() const { return f->dim(); }
};

// F(x; xi) = f(x; xi) + h(x)
double objective_value(const CompositeProblem& p, std::span<const double> x, const Noise& xi);
// noise-free F(x) = f(x) + h(x); requires has_exact_value()
double objective_value_exact(const CompositeProblem& p, std::span<const double> x);

// ---------------------------------------------------------------------------
// built-in synthetic problem: f(x; xi) = 1/2 ||A x - b + eps_xi||_2^2
// ---------------------------------------------------------------------------

// Row-sparse least squares with a planted s-sparse minimizer x*. The noise
// realization shifts the residual, so the two-point difference keeps a
// genuine stochastic component while E[grad f(x;xi)] = A^T(Ax - b) exactly.
class SparseQuadratic final : public Objective {
public:
    SparseQuadratic(std::size_t d, std::size_t s, double noise_std, RngStream rng);

    std::size_t dim() const override { return d_; }
    double eval(std::span<const double> x, const Noise& xi) const override;
    Noise draw_noise(RngStream& rng) const override;

    bool has_exact_gradient() const override { return true; }
    void exact_gradient(std::span<const double> x, std::span<double> g) const override;
    bool has_exact_value() const override { return true; }
    double exact_value(std::span<const double> x) const override;

    // grad_x f(x; xi) = A^T(Ax - b + eps); diagnostics for unbiasedness checks
    void stochastic_gradient(std::span<const double> x, const Noise& xi, std::span<double> g) const;

    const Vec& planted_minimizer() const { return xstar_; }
    double grad_lipschitz() const { return lipschitz_; }
    double frobenius_norm() const { return frob_; }
    double noise_std() const { return noise_std_; }

private:
    void apply(std::span<const double> x, std::span<double> out) const;       // out = A x
    void apply_t(std::span<const double> r, std::span<double> out) const;     // out = A^T r

    std::size_t d_;
    double noise_std_;
    std::vector<std::int32_t> row_ptr_, col_;
    Vec val_;
    Vec b_;
    Vec xstar_;
    double lipschitz_ = 0.0;  // sigma_max(A)^2
    double frob_ = 0.0;
};

// d >= 3 (the dimension floor used throughout), 1 <= s <= d, noise_std >= 0.
CompositeProblem make_sparse_quadratic(std::size_t d, std::size_t s, double noise_std, RngStream rng,
                                       Regularizer h = Regularizer::none());

}  // namespace zomirror
