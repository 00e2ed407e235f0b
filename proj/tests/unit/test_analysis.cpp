#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cvlab/analysis.hpp"
#include "cvlab/errors.hpp"
#include "cvlab/random.hpp"

using namespace cvlab;

namespace {

std::vector<double> noise(std::size_t T, Rng& r, double scale, double shift = 0.0) {
    std::vector<double> v(T);
    for (auto& x : v) x = shift + scale * r.normal();
    return v;
}

}  // namespace

TEST_CASE("identity pairing") {
    Rng r(1);
    const auto s = noise(50, r, 0.1, 0.6);
    const auto d = decompose(PairedPerformanceSample(s, s));
    CHECK(d.rms_cond == 0.0);
    CHECK(d.rho == doctest::Approx(1.0));
    CHECK(std::abs(d.residual) <= 1e-12);
    CHECK(d.sigma_ratio == doctest::Approx(1.0));
}

TEST_CASE("hand-computed moments") {
    // s = (0, 2), s_hat = (1, 1): sigma_s = 1, sigma_hat = 0 -> degenerate
    const auto d = decompose(PairedPerformanceSample({0, 2}, {1, 1}));
    CHECK(d.degenerate);
    CHECK(d.mean_s == 1.0);
    CHECK(d.sigma_s == 1.0);
    CHECK(d.mse_cond == 1.0);
    CHECK(d.mse_mean == 0.0);
    CHECK_THROWS_AS(identity_residual(PairedPerformanceSample({1, 1}, {0, 2})), DomainError);

    // s = (0, 1, 2), s_hat = (1, 0, 2): cov = 1/3, var = 2/3 each -> rho = 1/2
    const auto e = decompose(PairedPerformanceSample({0, 1, 2}, {1, 0, 2}));
    CHECK(e.rho == doctest::Approx(0.5));
    CHECK(e.mse_cond == doctest::Approx(2.0 / 3.0));
    CHECK(e.mse_mean == doctest::Approx(2.0 / 3.0));
    CHECK(e.lhs == doctest::Approx(1.0));
    CHECK(e.rhs == doctest::Approx(1.0));
}

TEST_CASE("residual is tiny on random vectors") {
    Rng r(2);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t T = 2 + r.below(200);
        const auto s = noise(T, r, 0.05 + r.uniform(), r.uniform());
        const auto e = noise(T, r, 0.05 + r.uniform(), r.uniform());
        CHECK(identity_residual(PairedPerformanceSample(s, e)) <= 1e-12);
    }
}

TEST_CASE("independent noise gives the zero-correlation limit") {
    Rng r(3);
    const std::size_t T = 200000;
    const auto s = noise(T, r, 0.05, 0.6);
    const auto e = noise(T, r, 0.08, 0.6);
    const auto d = decompose(PairedPerformanceSample(s, e));
    CHECK(std::abs(d.rho) < 0.01);
    CHECK(d.mse_cond == doctest::Approx(d.mse_mean + d.sigma_s * d.sigma_s).epsilon(0.01));
}

TEST_CASE("shift invariance and exchange") {
    Rng r(4);
    const auto s = noise(100, r, 0.1, 0.5);
    auto e = noise(100, r, 0.1, 0.5);
    for (std::size_t t = 0; t < e.size(); ++t) e[t] += 0.5 * s[t];
    auto s2 = s, e2 = e;
    for (auto& v : s2) v += 3.0;
    for (auto& v : e2) v += 3.0;
    const auto a = decompose(PairedPerformanceSample(s, e));
    const auto b = decompose(PairedPerformanceSample(s2, e2));
    CHECK(a.rho == doctest::Approx(b.rho));
    CHECK(a.sigma_s == doctest::Approx(b.sigma_s));
    CHECK(a.rms_cond == doctest::Approx(b.rms_cond));
    CHECK(a.rms_mean == doctest::Approx(b.rms_mean));
    const auto x = decompose(PairedPerformanceSample(e, s));
    CHECK(x.sigma_ratio == doctest::Approx(1.0 / a.sigma_ratio));
    CHECK(x.rho == doctest::Approx(a.rho));
}

TEST_CASE("sample validation") {
    CHECK_THROWS_AS(PairedPerformanceSample({1}, {1}), DomainError);
    CHECK_THROWS_AS(PairedPerformanceSample({1, 2}, {1}), DomainError);
    CHECK_THROWS_AS(PairedPerformanceSample({1, NAN}, {1, 2}), DomainError);
}

TEST_CASE("convergence diagnostic") {
    CHECK(convergence_diagnostic({{10, 0.3}, {100, 0.3}, {1000, 0.3}}, 0.0).converged);
    std::map<std::size_t, double> decay;
    for (std::size_t M : {10u, 20u, 40u, 80u, 160u, 320u}) decay[M] = 0.5 + 1.0 / static_cast<double>(M);
    const auto c = convergence_diagnostic(decay, 10.0 / 320.0);
    CHECK(c.converged);
    CHECK(c.gaps.size() == 5);
    CHECK(c.max_tail_gap == doctest::Approx(1.0 / 80 - 1.0 / 160 ));
    CHECK_FALSE(convergence_diagnostic(decay, 1e-4).converged);
    CHECK_THROWS_AS(convergence_diagnostic({{1, 0.0}, {2, 0.0}}, 1.0), DomainError);
}
