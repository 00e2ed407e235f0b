#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "cvlab/core.hpp"
#include "cvlab/errors.hpp"
#include "cvlab/random.hpp"
#include "oracles.hpp"

using namespace cvlab;

TEST_CASE("mw kernel cases") {
    CHECK(mw_kernel(1.0, 2.0) == 1.0);
    CHECK(mw_kernel(3.5, 3.5) == 0.5);
    CHECK(mw_kernel(2.0, 1.0) == 0.0);
    CHECK_THROWS_AS(mw_kernel(std::nan(""), 1.0), DomainError);
    CHECK_THROWS_AS(mw_kernel(1.0, std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("empirical auc small cases") {
    const std::vector<double> a{0.0}, b{1.0};
    CHECK(empirical_auc(a, b) == 1.0);
    const std::vector<double> z{0.0, 0.0};
    CHECK(empirical_auc(z, z) == 0.5);
    const std::vector<double> c{1, 2}, d{1.5, 3};
    CHECK(empirical_auc(c, d) == 0.75);
    CHECK_THROWS_AS(empirical_auc(std::vector<double>{}, d), DomainError);
}

TEST_CASE("empirical auc matches the pairwise double loop") {
    Rng rng(17);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n1 = 1 + rng.below(12), n2 = 1 + rng.below(12);
        std::vector<double> s1(n1), s2(n2);
        // coarse grid to force ties
        for (auto& v : s1) v = static_cast<double>(rng.below(6));
        for (auto& v : s2) v = static_cast<double>(rng.below(6));
        double sum = 0.0;
        for (double x : s1)
            for (double y : s2) sum += oracle::psi(x, y);
        CHECK(empirical_auc(s1, s2) == doctest::Approx(sum / static_cast<double>(n1 * n2)).epsilon(1e-15));
    }
}

TEST_CASE("classification and zero-one loss") {
    const ScoringRule minus(1, [](std::span<const double>) { return -1.0; });
    const ScoringRule plus(1, [](std::span<const double>) { return 1.0; });
    const ScoringRule zero(1, [](std::span<const double>) { return 0.0; });
    const double x = 0.0;
    const LabeledPoint p1{{&x, 1}, ClassLabel::One};
    const LabeledPoint p2{{&x, 1}, ClassLabel::Two};
    CHECK(zero_one_loss(minus, p1, 0.0) == 0.0);
    CHECK(zero_one_loss(plus, p1, 0.0) == 1.0);
    CHECK(zero_one_loss(zero, p2, 0.0) == 0.0);
    CHECK(classify(0.0, 0.0) == ClassLabel::Two);
    CHECK(classify(-1e-300, 0.0) == ClassLabel::One);
}

TEST_CASE("dataset validation") {
    CHECK_THROWS_AS(StratifiedDataset(FeatureMatrix(0, 1), FeatureMatrix(1, 1)), DomainError);
    CHECK_THROWS_AS(StratifiedDataset(FeatureMatrix(1, 2), FeatureMatrix(1, 1)), DomainError);
    CHECK_THROWS_AS(StratifiedDataset(FeatureMatrix(1, 1, {std::nan("")}), FeatureMatrix(1, 1)),
                    DomainError);
    const auto d = oracle::one_d({1, 2}, {3, 4, 5});
    CHECK(d.n() == 5);
    CHECK(d.pooled_point(1).label == ClassLabel::One);
    CHECK(d.pooled_point(2).label == ClassLabel::Two);
    CHECK(d.pooled_point(4).features[0] == 5.0);
}

TEST_CASE("scoring rule checks dimension") {
    const ScoringRule r(2, [](std::span<const double> x) { return x[0] + x[1]; });
    const std::vector<double> ok{1, 2}, bad{1};
    CHECK(r.score(ok) == 3.0);
    CHECK_THROWS_AS(r.score(bad), DomainError);
}

TEST_CASE("rng determinism and derived seeds") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a() == b());
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
    Rng c(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(c.below(5) < 5);
    }
}

TEST_CASE("normal variates have unit moments") {
    Rng r(99);
    const int N = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < N; ++i) {
        const double z = r.normal();
        s += z;
        s2 += z * z;
    }
    CHECK(std::abs(s / N) < 0.01);
    CHECK(std::abs(s2 / N - 1.0) < 0.02);
}
