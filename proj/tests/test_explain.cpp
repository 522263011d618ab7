#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "zomirror/bench.hpp"
#include "zomirror/explain.hpp"
#include "zomirror/optimizer.hpp"

using namespace zomirror;

namespace {

// classifier emitting fixed logits regardless of the input: W = 0, b2 = logits
TinyClassifier fixed_logits(Vec logits, std::int32_t n = 3) {
    TinyClassifier m;
    m.input_dim = n;
    m.hidden_dim = 2;
    m.num_classes = static_cast<std::int32_t>(logits.size());
    m.seed = 0;
    m.w1.assign(static_cast<std::size_t>(m.hidden_dim) * n, 0.0);
    m.b1.assign(m.hidden_dim, 0.0);
    m.w2.assign(static_cast<std::size_t>(m.num_classes) * m.hidden_dim, 0.0);
    m.b2 = std::move(logits);
    return m;
}

}  // namespace

TEST_CASE("pp loss hinge cases") {
    const Vec x(3, 0.5);
    // logits (1, 3), target is the larger: max{1 - 3, -10} = -2
    CHECK(pp_loss(fixed_logits({1.0, 3.0}), x, 1, 10.0) == doctest::Approx(-2.0));
    // all logits equal: runner-up ties the target
    CHECK(pp_loss(fixed_logits({2.0, 2.0, 2.0}), x, 0, 5.0) == doctest::Approx(0.0));
    // margin beyond kappa: floor engages
    CHECK(pp_loss(fixed_logits({0.0, 100.0}), x, 1, 2.0) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(pp_loss(fixed_logits({0.0, 1.0}), x, 7, 1.0), std::invalid_argument);
}

TEST_CASE("pn loss hinge cases") {
    const Vec x0(3, 0.2);
    const Vec zero(3, 0.0);
    // correctly classified with margin 2 < kappa: pn at zero perturbation is the margin
    CHECK(pn_loss(fixed_logits({1.0, 3.0}), zero, x0, 1, 10.0) == doctest::Approx(2.0));
    // flipped with margin above kappa: floor engages
    CHECK(pn_loss(fixed_logits({9.0, 1.0}), zero, x0, 1, 3.0) == doctest::Approx(-3.0));
    CHECK_THROWS_AS(pn_loss(fixed_logits({1.0, 2.0}), Vec(2, 0.0), x0, 1, 1.0),
                    std::invalid_argument);
}

TEST_CASE("pp at the sample mirrors pn at zero perturbation") {
    // both evaluate the model at x0; with a large floor the hinges are exact
    // negations of each other
    const TinyClassifier m = TinyClassifier::generate(16, 8, 3, 21);
    RngStream rng(2, 0);
    Vec x0(16);
    for (auto& v : x0) v = rng.uniform01();
    const std::int32_t k0 = m.predict(x0);
    const double big = 1e9;
    CHECK(pp_loss(m, x0, k0, big) == doctest::Approx(-pn_loss(m, Vec(16, 0.0), x0, k0, big)));
}

TEST_CASE("losses are floored at -kappa") {
    const TinyClassifier m = TinyClassifier::generate(8, 4, 2, 3);
    RngStream rng(3, 0);
    for (int rep = 0; rep < 500; ++rep) {
        Vec x(8), x0(8);
        for (int i = 0; i < 8; ++i) {
            x0[i] = rng.uniform01();
            x[i] = rng.uniform01() * x0[i];
        }
        const double kappa = rng.uniform(0.0, 2.0);
        CHECK(pp_loss(m, x, 0, kappa) >= -kappa);
        CHECK(pn_loss(m, x, x0, 0, kappa) >= -kappa);
    }
}

TEST_CASE("forward pass golden value by direct summation") {
    const TinyClassifier m = TinyClassifier::generate(5, 3, 2, 99);
    RngStream rng(4, 0);
    Vec x(5);
    for (auto& v : x) v = rng.uniform01();

    Vec hidden(3, 0.0);
    for (int hrow = 0; hrow < 3; ++hrow) {
        double s = m.b1[hrow];
        for (int i = 0; i < 5; ++i) s += m.w1[hrow * 5 + i] * x[i];
        hidden[hrow] = std::tanh(s);
    }
    Vec logits(2, 0.0);
    for (int c = 0; c < 2; ++c) {
        double s = m.b2[c];
        for (int hrow = 0; hrow < 3; ++hrow) s += m.w2[c * 3 + hrow] * hidden[hrow];
        logits[c] = s;
    }
    const Vec got = m.forward(x);
    CHECK(got[0] == doctest::Approx(logits[0]).epsilon(1e-14));
    CHECK(got[1] == doctest::Approx(logits[1]).epsilon(1e-14));

    const std::int32_t k0 = logits[0] >= logits[1] ? 0 : 1;
    CHECK(pn_loss(m, Vec(5, 0.0), x, k0, 10.0) ==
          doctest::Approx(logits[k0] - logits[1 - k0]).epsilon(1e-13));
}

TEST_CASE("fixture file round-trips") {
    const TinyClassifier m = TinyClassifier::generate(64, 32, 2, 7);
    const auto path = std::filesystem::temp_directory_path() / "zomirror_cls_test.bin";
    m.save(path);
    const TinyClassifier back = TinyClassifier::load(path);
    CHECK(back.input_dim == m.input_dim);
    CHECK(back.hidden_dim == m.hidden_dim);
    CHECK(back.num_classes == m.num_classes);
    CHECK(back.seed == m.seed);
    CHECK(back.w1 == m.w1);
    CHECK(back.b1 == m.b1);
    CHECK(back.w2 == m.w2);
    CHECK(back.b2 == m.b2);
    std::filesystem::remove(path);
    CHECK_THROWS(TinyClassifier::load("/nonexistent/zomirror.bin"));
}

TEST_CASE("bundled fixture matches regeneration") {
    const auto bundled = std::filesystem::path(ZOMIRROR_SOURCE_DIR) / "fixtures" /
                         "mlp_n64_h32_c2_seed7.bin";
    REQUIRE(std::filesystem::exists(bundled));
    const TinyClassifier disk = TinyClassifier::load(bundled);
    const TinyClassifier gen = TinyClassifier::generate(64, 32, 2, 7);
    CHECK(disk.w1 == gen.w1);
    CHECK(disk.b1 == gen.b1);
    CHECK(disk.w2 == gen.w2);
    CHECK(disk.b2 == gen.b2);
}

TEST_CASE("explain problems wire boxes and start points") {
    const TinyClassifier m = TinyClassifier::generate(8, 4, 2, 5);
    RngStream rng(6, 0);
    ExplainTask task;
    task.gamma1 = 0.1;
    task.gamma2 = 0.1;
    task.x0.resize(8);
    for (auto& v : task.x0) v = rng.uniform01();
    task.x0[3] = 1.0;  // degenerate PN coordinate

    task.kind = ExplainTask::Kind::PP;
    const CompositeProblem pp = make_explain_problem(task, m);
    CHECK(pp.feasible.upper == task.x0);
    CHECK(*pp.start == task.x0);  // sample itself is feasible
    CHECK(pp.feasible.contains(task.x0));

    task.kind = ExplainTask::Kind::PN;
    const CompositeProblem pn = make_explain_problem(task, m);
    CHECK(pn.feasible.upper[3] == 0.0);  // box collapses where x0_i = 1
    for (int i = 0; i < 8; ++i)
        CHECK((*pn.start)[i] == doctest::Approx(0.5 * (1.0 - task.x0[i])));

    ExplainTask bad = task;
    bad.x0[0] = 1.5;
    CHECK_THROWS_AS(make_explain_problem(bad, m), std::invalid_argument);
}

TEST_CASE("degenerate pn coordinate stays pinned at zero") {
    const TinyClassifier m = TinyClassifier::generate(8, 4, 2, 5);
    ExplainTask task;
    task.kind = ExplainTask::Kind::PN;
    task.gamma1 = 0.05;
    task.gamma2 = 0.05;
    task.x0.assign(8, 0.3);
    task.x0[2] = 1.0;
    const CompositeProblem p = make_explain_problem(task, m);

    OptimizerConfig cfg;
    cfg.algorithm = Algorithm::ZoAdaExpMd;
    cfg.iterations = 40;
    cfg.seed = 1;
    cfg.estimator = {Scheme::Rademacher, 1e-2, 8};
    const RunTrace tr = run(p, cfg);
    CHECK(tr.x_final[2] == 0.0);
    CHECK(p.feasible.contains(tr.x_final));
    // feasible iterates never push a pixel outside [0, 1]
    for (int i = 0; i < 8; ++i) {
        CHECK(tr.x_final[i] + task.x0[i] >= 0.0);
        CHECK(tr.x_final[i] + task.x0[i] <= 1.0 + 1e-12);
    }
}

TEST_CASE("adaptive run reduces the pn loss within 200 iterations") {
    const TinyClassifier m = TinyClassifier::generate(64, 32, 2, 7);
    ExplainTask task;
    task.kind = ExplainTask::Kind::PN;
    task.gamma1 = 0.1;
    task.gamma2 = 0.1;
    task.x0.resize(64);
    RngStream rng(3, 0x5a);
    for (auto& v : task.x0) v = rng.uniform01();
    const CompositeProblem p = make_explain_problem(task, m);
    const double start_loss = p.f->exact_value(*p.start);

    std::vector<double> finals;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        OptimizerConfig cfg;
        cfg.algorithm = Algorithm::ZoAdaExpMd;
        cfg.iterations = 200;
        cfg.seed = seed;
        cfg.estimator = {Scheme::Rademacher, rademacher_nu_fixed_batch(64, 32), 32};
        const RunTrace tr = run(p, cfg);
        REQUIRE(tr.status == RunStatus::Ok);
        finals.push_back(p.f->exact_value(tr.x_final));
    }
    CHECK(median(finals) < start_loss);
}
