#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zomirror/core.hpp"
#include "zomirror/kernels.hpp"

using namespace zomirror;

TEST_CASE("rng streams are deterministic and splittable") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    RngStream parent(42, 7);
    RngStream c1 = parent.child(1), c1_again = parent.child(1), c2 = parent.child(2);
    CHECK(c1.next_u64() == c1_again.next_u64());
    CHECK(c1.next_u64() != c2.next_u64());

    // child derivation ignores consumed state
    RngStream consumed(42, 7);
    consumed.next_u64();
    CHECK(consumed.child(1).next_u64() == parent.child(1).next_u64());
}

TEST_CASE("rng draw shapes") {
    RngStream rng(3, 0);
    double mean = 0.0, var = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        mean += g;
        var += g * g;
    }
    mean /= n;
    var = var / n - mean * mean;
    CHECK(std::fabs(mean) < 0.01);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));

    int pos = 0;
    for (int i = 0; i < n; ++i) pos += rng.sign() > 0.0;
    CHECK(std::fabs(pos - n / 2) < 3 * std::sqrt(n / 4.0));

    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(rng.below(17) < 17);
    }
}

TEST_CASE("regularizer value and convexity") {
    CHECK(Regularizer::none().value(Vec{1.0, -2.0}) == 0.0);
    const Regularizer en = Regularizer::elastic_net(1.0, 0.0);
    CHECK(en.value(Vec{1.0, -1.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(Regularizer::elastic_net(-0.1, 0.0), std::invalid_argument);

    // midpoint convexity on random pairs
    const Regularizer r = Regularizer::elastic_net(0.3, 0.7);
    RngStream rng(5, 0);
    for (int rep = 0; rep < 1000; ++rep) {
        Vec x(8), y(8), mid(8);
        for (int i = 0; i < 8; ++i) {
            x[i] = rng.uniform(-3.0, 3.0);
            y[i] = rng.uniform(-3.0, 3.0);
            mid[i] = 0.5 * (x[i] + y[i]);
        }
        CHECK(r.value(mid) <= 0.5 * (r.value(x) + r.value(y)) + 1e-12);
    }
}

TEST_CASE("feasible set boxes") {
    const FeasibleSet box = FeasibleSet::box(Vec{0.0, -1.0}, Vec{1.0, 1.0});
    CHECK(box.contains(Vec{0.5, 0.0}));
    CHECK_FALSE(box.contains(Vec{1.5, 0.0}));
    CHECK_THROWS_AS(FeasibleSet::box(Vec{1.0}, Vec{0.0}), std::invalid_argument);

    // clamping lands inside for arbitrary points
    RngStream rng(6, 0);
    for (int rep = 0; rep < 1000; ++rep) {
        Vec x{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
        Vec out(2);
        box.clamp(x, out);
        CHECK(box.contains(out));
    }

    const Vec c = box.center(2);
    CHECK(c[0] == doctest::Approx(0.5));
    CHECK(c[1] == doctest::Approx(0.0));
    CHECK(FeasibleSet::all().center(3) == Vec{0.0, 0.0, 0.0});
}

TEST_CASE("sparse quadratic validation") {
    CHECK_THROWS_AS(make_sparse_quadratic(2, 1, 0.0, RngStream(1, 0)), std::invalid_argument);
    CHECK_THROWS_AS(make_sparse_quadratic(8, 9, 0.0, RngStream(1, 0)), std::invalid_argument);
    CHECK_THROWS_AS(make_sparse_quadratic(8, 4, -0.5, RngStream(1, 0)), std::invalid_argument);
}

TEST_CASE("planted minimizer attains zero") {
    const CompositeProblem p = make_sparse_quadratic(16, 4, 0.0, RngStream(9, 0));
    const auto* sq = dynamic_cast<const SparseQuadratic*>(p.f.get());
    REQUIRE(sq != nullptr);
    const Vec& xs = sq->planted_minimizer();

    // zero objective under any realization (noise_std = 0 makes xi empty)
    RngStream rng(10, 0);
    for (int rep = 0; rep < 5; ++rep) {
        const Noise xi = sq->draw_noise(rng);
        CHECK(sq->eval(xs, xi) == doctest::Approx(0.0).epsilon(1e-14));
    }

    Vec g(16);
    sq->exact_gradient(xs, g);
    CHECK(kern::ops().linf_norm(g.data(), g.size()) <= 1e-12);

    CHECK(*p.smoothness.grad_lipschitz > 0.0);
    CHECK(*p.smoothness.l1_radius ==
          doctest::Approx(kern::ops().l1_norm(xs.data(), xs.size())));
}

TEST_CASE("stochastic gradient is unbiased") {
    const CompositeProblem p = make_sparse_quadratic(16, 4, 0.1, RngStream(12, 0));
    const auto* sq = dynamic_cast<const SparseQuadratic*>(p.f.get());
    RngStream rng(13, 0);
    Vec x(16);
    for (auto& e : x) e = rng.uniform(-1.0, 1.0);
    Vec exact(16);
    sq->exact_gradient(x, exact);

    auto mc_error = [&](int draws, std::uint64_t stream) {
        RngStream noise_rng(13, stream);
        Vec mean(16, 0.0), g(16), m2(16, 0.0);
        for (int i = 0; i < draws; ++i) {
            const Noise xi = sq->draw_noise(noise_rng);
            sq->stochastic_gradient(x, xi, g);
            for (int k = 0; k < 16; ++k) {
                mean[k] += g[k];
                m2[k] += g[k] * g[k];
            }
        }
        double worst_err = 0.0, worst_sigma = 0.0;
        for (int k = 0; k < 16; ++k) {
            mean[k] /= draws;
            const double var = m2[k] / draws - mean[k] * mean[k];
            worst_err = std::max(worst_err, std::fabs(mean[k] - exact[k]));
            worst_sigma = std::max(worst_sigma, std::sqrt(std::max(var, 0.0) / draws));
        }
        return std::pair{worst_err, worst_sigma};
    };

    const auto [err5, se5] = mc_error(100000, 1);
    CHECK(err5 <= 3.0 * se5 + 1e-12);  // within 3 standard errors per coordinate

    // error shrinks consistently with 1/sqrt(N)
    const auto [err3, se3] = mc_error(1000, 2);
    CHECK(err5 < err3);
    CHECK(err5 <= err3 / 2.0);
}

TEST_CASE("objective value composes f and h") {
    struct Zero final : Objective {
        std::size_t dim() const override { return 2; }
        double eval(std::span<const double>, const Noise&) const override { return 0.0; }
    };
    CompositeProblem p;
    p.f = std::make_shared<Zero>();
    CHECK(objective_value(p, Vec{0.0, 0.0}, Noise{}) == 0.0);

    p.h = Regularizer::elastic_net(1.0, 0.0);
    CHECK(objective_value(p, Vec{1.0, -1.0}, Noise{}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(objective_value(p, Vec{1.0}, Noise{}), std::invalid_argument);
}

TEST_CASE("objective golden value by direct summation") {
    const CompositeProblem p =
        make_sparse_quadratic(8, 3, 0.0, RngStream(21, 0), Regularizer::elastic_net(0.1, 0.5));
    const auto* sq = dynamic_cast<const SparseQuadratic*>(p.f.get());
    const Vec& xs = sq->planted_minimizer();

    // f vanishes at the planted point, so F(x*) is the regularizer alone
    double l1 = 0.0, l2 = 0.0;
    for (double v : xs) {
        l1 += std::fabs(v);
        l2 += v * v;
    }
    CHECK(objective_value_exact(p, xs) == doctest::Approx(0.1 * l1 + 0.25 * l2).epsilon(1e-12));
}

TEST_CASE("oracle sequences replay bit-identically") {
    const CompositeProblem p = make_sparse_quadratic(12, 3, 0.2, RngStream(31, 5));
    const CompositeProblem q = make_sparse_quadratic(12, 3, 0.2, RngStream(31, 5));
    RngStream ra(77, 1), rb(77, 1);
    Vec x(12, 0.25);
    for (int i = 0; i < 50; ++i) {
        const Noise xa = p.f->draw_noise(ra);
        const Noise xb = q.f->draw_noise(rb);
        REQUIRE(xa.values.size() == xb.values.size());
        for (std::size_t k = 0; k < xa.values.size(); ++k) CHECK(xa.values[k] == xb.values[k]);
        CHECK(p.f->eval(x, xa) == q.f->eval(x, xb));
    }
}
