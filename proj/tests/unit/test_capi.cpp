#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "cvlab/cvlab.h"

namespace {

// c1 = {0, 1, 2.5}, c2 = {2, 3, 4}: leave-one-out nearest-mean misclassifies 2 of 6.
cvlab_dataset* hand_dataset() {
    const double x1[] = {0.0, 1.0, 2.5};
    const double x2[] = {2.0, 3.0, 4.0};
    cvlab_dataset* d = nullptr;
    REQUIRE(cvlab_dataset_create(3, 3, 1, x1, x2, &d) == CVLAB_OK);
    return d;
}

std::string take(char* s) {
    std::string out(s);
    cvlab_string_free(s);
    return out;
}

void count_cb(const char*, int64_t, int passed, void* user) {
    auto* tally = static_cast<std::size_t*>(user);
    tally[0] += 1;
    tally[1] += passed ? 0 : 1;
}

}  // namespace

TEST_CASE("version string") { CHECK(std::string(cvlab_version()) == "1.0.0"); }

TEST_CASE("dataset handles round-trip through CSV") {
    cvlab_dataset* d = hand_dataset();
    size_t n1 = 0, n2 = 0, p = 0;
    REQUIRE(cvlab_dataset_shape(d, &n1, &n2, &p) == CVLAB_OK);
    CHECK(n1 == 3);
    CHECK(n2 == 3);
    CHECK(p == 1);
    char* csv = nullptr;
    REQUIRE(cvlab_dataset_to_csv(d, &csv) == CVLAB_OK);
    const std::string text = take(csv);
    CHECK(text.rfind("class,f1\n1,0\n", 0) == 0);
    cvlab_dataset_free(d);
}

TEST_CASE("null pointers and bad enums map to argument errors") {
    cvlab_dataset* d = nullptr;
    CHECK(cvlab_dataset_create(1, 1, 1, nullptr, nullptr, &d) == CVLAB_E_ARGUMENT);
    CHECK(std::strlen(cvlab_last_error()) > 0);
    cvlab_trainer* t = nullptr;
    CHECK(cvlab_trainer_create(static_cast<cvlab_trainer_kind>(9), 0.0, &t) == CVLAB_E_ARGUMENT);
    cvlab_dataset_free(nullptr);
    cvlab_trainer_free(nullptr);
}

TEST_CASE("estimate: CVN hand value, JSON and CSV") {
    cvlab_dataset* d = hand_dataset();
    cvlab_trainer* t = nullptr;
    REQUIRE(cvlab_trainer_create(CVLAB_TRAINER_NEAREST_MEAN, 0.0, &t) == CVLAB_OK);
    cvlab_estimator_config c;
    cvlab_estimator_config_init(&c);
    c.version = CVLAB_CVN;
    cvlab_estimate_result r{};
    char* json = nullptr;
    char* csv = nullptr;
    REQUIRE(cvlab_estimate(d, t, &c, &r, &json, &csv) == CVLAB_OK);
    CHECK(r.value == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
    const std::string js = take(json);
    CHECK(js.find("\"version\": \"CVN\"") != std::string::npos);
    CHECK(js.find("\"trainer\": \"nearest_mean\"") != std::string::npos);
    CHECK(take(csv).find("value") != std::string::npos);
    cvlab_trainer_free(t);
    cvlab_dataset_free(d);
}

TEST_CASE("estimate: status codes for divisibility and domain errors") {
    cvlab_dataset* d = hand_dataset();
    cvlab_trainer* t = nullptr;
    REQUIRE(cvlab_trainer_create(CVLAB_TRAINER_LDA, 1e-6, &t) == CVLAB_OK);
    cvlab_estimator_config c;
    cvlab_estimator_config_init(&c);
    c.version = CVLAB_CVK;
    c.K = 4;
    cvlab_estimate_result r{};
    CHECK(cvlab_estimate(d, t, &c, &r, nullptr, nullptr) == CVLAB_E_DIVISIBILITY);
    CHECK(std::string(cvlab_last_error()).find("divide") != std::string::npos);

    c.metric = CVLAB_AUC;
    c.variant = CVLAB_REDUCED;
    c.K1 = 3;
    c.K2 = 1;
    CHECK(cvlab_estimate(d, t, &c, &r, nullptr, nullptr) != CVLAB_OK);
    cvlab_trainer_free(t);
    cvlab_dataset_free(d);
}

TEST_CASE("estimate: pooled and partitioned CVK agree through the C API") {
    cvlab_dataset* d = nullptr;
    REQUIRE(cvlab_dataset_generate(2, 0.8, 12, 12, 99, &d) == CVLAB_OK);
    cvlab_trainer* t = nullptr;
    REQUIRE(cvlab_trainer_create(CVLAB_TRAINER_LDA, 1e-6, &t) == CVLAB_OK);
    cvlab_estimator_config c;
    cvlab_estimator_config_init(&c);
    c.version = CVLAB_CVKR;
    c.K = 4;
    c.M = 3;
    c.seed = 5;
    cvlab_estimate_result pooled{}, part{};
    REQUIRE(cvlab_estimate(d, t, &c, &pooled, nullptr, nullptr) == CVLAB_OK);
    c.variant = CVLAB_PARTITIONED;
    REQUIRE(cvlab_estimate(d, t, &c, &part, nullptr, nullptr) == CVLAB_OK);
    CHECK(std::abs(pooled.value - part.value) <= 1e-12);
    cvlab_trainer_free(t);
    cvlab_dataset_free(d);
}

TEST_CASE("verify reports every identity and catches a wrong pmf") {
    std::size_t tally[2] = {0, 0};
    size_t failed = 99;
    REQUIRE(cvlab_verify(20, 0, count_cb, tally, &failed) == CVLAB_OK);
    CHECK(failed == 0);
    CHECK(tally[0] == 19 * 6);
    CHECK(tally[1] == 0);
    REQUIRE(cvlab_verify(20, 1, nullptr, nullptr, &failed) == CVLAB_OK);
    CHECK(failed > 0);
    CHECK(cvlab_verify(1, 0, nullptr, nullptr, &failed) == CVLAB_E_DOMAIN);
}

TEST_CASE("decompose: identity holds and bad input is rejected") {
    const double s[] = {0.6, 0.7, 0.65, 0.8, 0.55};
    const double e[] = {0.62, 0.61, 0.7, 0.75, 0.5};
    cvlab_decomposition out{};
    REQUIRE(cvlab_decompose(s, e, 5, &out) == CVLAB_OK);
    CHECK(out.T == 5);
    CHECK(std::abs(out.residual) <= 1e-12);
    CHECK(out.degenerate == 0);
    CHECK(cvlab_decompose(s, e, 1, &out) == CVLAB_E_DOMAIN);
    CHECK(cvlab_decompose_csv("/nonexistent/paired.csv", &out, nullptr, nullptr) == CVLAB_E_IO);
}

TEST_CASE("simulate: small campaign exposes roles, triples and tables") {
    cvlab_simulate_config c;
    cvlab_simulate_config_init(&c);
    c.p = 2;
    c.n1 = c.n2 = 6;
    c.trials = 4;
    c.test_per_class = 50;
    c.estimator.B = 10;
    c.seed = 3;
    cvlab_simulation* sim = nullptr;
    REQUIRE(cvlab_simulate(&c, &sim) == CVLAB_OK);
    CHECK(cvlab_simulation_role_count(sim) == 3);
    CHECK(cvlab_simulation_triple_count(sim) == 4);
    CHECK(cvlab_simulation_aborted(sim) == 0);
    cvlab_triple tr{};
    REQUIRE(cvlab_simulation_triple(sim, 0, &tr) == CVLAB_OK);
    CHECK(tr.s >= 0.0);
    CHECK(tr.s <= 1.0);
    CHECK(cvlab_simulation_triple(sim, 4, &tr) == CVLAB_E_ARGUMENT);
    char* table = nullptr;
    REQUIRE(cvlab_simulation_table_csv(sim, &table) == CVLAB_OK);
    CHECK(take(table).rfind("role,mean,sigma,rms_cond,rms_mean,rho,n\n", 0) == 0);
    cvlab_simulation_free(sim);
}

TEST_CASE("ratio curve: theory column and handle access") {
    const size_t grid[] = {4, 6};
    cvlab_ratio_config c;
    cvlab_ratio_config_init(&c);
    c.n1_grid = grid;
    c.grid_len = 2;
    c.B = 20;
    c.replicates = 3;
    c.seed = 8;
    cvlab_ratio_curve* r = nullptr;
    REQUIRE(cvlab_ratio_curve_run(&c, &r) == CVLAB_OK);
    REQUIRE(cvlab_ratio_curve_size(r) == 2);
    cvlab_ratio_point pt{};
    REQUIRE(cvlab_ratio_curve_point(r, 1, &pt) == CVLAB_OK);
    CHECK(pt.n1 == 6);
    CHECK(pt.ratio_theory == doctest::Approx(22.0 / 23.0).epsilon(1e-15));
    cvlab_ratio_curve_free(r);
}

TEST_CASE("write_file reports IO failures") {
    const char data[] = "x";
    CHECK(cvlab_write_file("/nonexistent/dir/file.txt", data, 1) == CVLAB_E_IO);
}
