#include "cvlab/cvlab.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "cvlab/combinatorics.hpp"
#include "cvlab/csv_io.hpp"
#include "cvlab/errors.hpp"
#include "cvlab/reports.hpp"
#include "cvlab/simlab.hpp"

struct cvlab_dataset {
    cvlab::StratifiedDataset data;
};

struct cvlab_trainer {
    std::unique_ptr<cvlab::Trainer> trainer;
};

struct cvlab_simulation {
    cvlab::WeakCorrResult result;
};

struct cvlab_ratio_curve {
    std::vector<cvlab::RatioPoint> points;
};

namespace {

thread_local std::string g_last_error;

cvlab_status fail(cvlab_status s, const char* msg) {
    g_last_error = msg;
    return s;
}

// Maps the library's exception hierarchy onto status codes. DivisibilityError is a
// DomainError, so it has to be caught first.
// Null handle or out-of-range enum value.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

template <class Fn>
cvlab_status guard(Fn&& fn) {
    try {
        fn();
        return CVLAB_OK;
    } catch (const ArgumentError& e) {
        return fail(CVLAB_E_ARGUMENT, e.what());
    } catch (const cvlab::DivisibilityError& e) {
        return fail(CVLAB_E_DIVISIBILITY, e.what());
    } catch (const cvlab::DomainError& e) {
        return fail(CVLAB_E_DOMAIN, e.what());
    } catch (const cvlab::TrainingError& e) {
        return fail(CVLAB_E_TRAINING, e.what());
    } catch (const cvlab::EstimationError& e) {
        return fail(CVLAB_E_ESTIMATION, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CVLAB_E_INTERNAL, "out of memory");
    } catch (const cvlab::IoError& e) {
        return fail(CVLAB_E_IO, e.what());
    } catch (const std::exception& e) {
        return fail(CVLAB_E_INTERNAL, e.what());
    } catch (...) {
        return fail(CVLAB_E_INTERNAL, "unknown error");
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

template <class E>
bool enum_ok(E v, int last) {
    const int i = static_cast<int>(v);
    return i >= 0 && i <= last;
}

cvlab::EstimatorConfig to_cpp(const cvlab_estimator_config& c) {
    if (!enum_ok(c.version, CVLAB_LOOB) || !enum_ok(c.variant, CVLAB_REDUCED) ||
        !enum_ok(c.metric, CVLAB_AUC) || !enum_ok(c.model, CVLAB_UNORDERED_MULTISET)) {
        throw ArgumentError("estimator config holds an unknown enum value");
    }
    cvlab::EstimatorConfig e;
    e.version = static_cast<cvlab::Version>(c.version);
    e.variant = static_cast<cvlab::Variant>(c.variant);
    e.metric = static_cast<cvlab::Metric>(c.metric);
    e.K = c.K;
    e.K1 = c.K1;
    e.K2 = c.K2;
    e.M = c.M;
    e.B = c.B;
    e.seed = c.seed;
    e.model = static_cast<cvlab::SamplingModel>(c.model);
    e.th = c.th;
    e.exec.strict = c.strict != 0;
    e.exec.threads = c.threads;
    return e;
}

cvlab::TrainerSpec trainer_spec(cvlab_trainer_kind kind, double ridge) {
    if (!enum_ok(kind, CVLAB_TRAINER_NEAREST_MEAN)) throw ArgumentError("unknown trainer kind");
    return {kind == CVLAB_TRAINER_LDA ? cvlab::TrainerKind::Lda : cvlab::TrainerKind::NearestMean, ridge};
}

void fill(const cvlab::DecompositionReport& d, cvlab_decomposition* out) {
    *out = {d.T,        d.mean_s,   d.mean_s_hat, d.sigma_s, d.sigma_s_hat,
            d.mse_cond, d.mse_mean, d.rms_cond,   d.rms_mean, d.rho,
            d.sigma_ratio, d.lhs,   d.rhs,        d.residual, d.degenerate ? 1 : 0};
}

}  // namespace

extern "C" {

const char* cvlab_last_error(void) { return g_last_error.c_str(); }

const char* cvlab_version(void) { return "1.0.0"; }

void cvlab_string_free(char* s) { std::free(s); }

cvlab_status cvlab_write_file(const char* path, const char* data, size_t len) {
    if (!path || (!data && len)) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] { cvlab::write_file_atomic(path, std::string_view(data ? data : "", len)); });
}

cvlab_status cvlab_dataset_create(size_t n1, size_t n2, size_t p, const double* x1, const double* x2,
                                  cvlab_dataset** out) {
    if (!x1 || !x2 || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] {
        cvlab::FeatureMatrix a(n1, p, std::vector<double>(x1, x1 + n1 * p));
        cvlab::FeatureMatrix b(n2, p, std::vector<double>(x2, x2 + n2 * p));
        *out = new cvlab_dataset{cvlab::StratifiedDataset(std::move(a), std::move(b))};
    });
}

cvlab_status cvlab_dataset_from_csv(const char* path, cvlab_dataset** out) {
    if (!path || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] { *out = new cvlab_dataset{cvlab::read_dataset_csv(path)}; });
}

cvlab_status cvlab_dataset_generate(size_t p, double delta, size_t n1, size_t n2, uint64_t seed,
                                    cvlab_dataset** out) {
    if (!out) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] { *out = new cvlab_dataset{cvlab::gen_multinormal({p, delta, n1, n2}, seed)}; });
}

cvlab_status cvlab_dataset_shape(const cvlab_dataset* d, size_t* n1, size_t* n2, size_t* p) {
    if (!d) return fail(CVLAB_E_ARGUMENT, "null dataset");
    if (n1) *n1 = d->data.n1();
    if (n2) *n2 = d->data.n2();
    if (p) *p = d->data.dim();
    return CVLAB_OK;
}

cvlab_status cvlab_dataset_to_csv(const cvlab_dataset* d, char** out) {
    if (!d || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] { *out = dup(cvlab::dataset_to_csv(d->data)); });
}

void cvlab_dataset_free(cvlab_dataset* d) { delete d; }

cvlab_status cvlab_trainer_create(cvlab_trainer_kind kind, double ridge, cvlab_trainer** out) {
    if (!out) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] { *out = new cvlab_trainer{cvlab::make_trainer(trainer_spec(kind, ridge))}; });
}

void cvlab_trainer_free(cvlab_trainer* t) { delete t; }

void cvlab_estimator_config_init(cvlab_estimator_config* c) {
    if (!c) return;
    *c = cvlab_estimator_config{};
    c->version = CVLAB_CVK;
    c->variant = CVLAB_POOLED;
    c->metric = CVLAB_ERROR;
    c->M = 1;
    c->B = 1;
    c->model = CVLAB_ORDERED;
    c->threads = 1;
}

cvlab_status cvlab_estimate(const cvlab_dataset* d, const cvlab_trainer* t,
                            const cvlab_estimator_config* c, cvlab_estimate_result* out,
                            char** json_out, char** csv_out) {
    if (!d || !t || !c || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] {
        const cvlab::EstimatorReport r = cvlab::estimate(d->data, *t->trainer, to_cpp(*c));
        *out = {r.value, r.excluded_count, r.skipped_resamples, r.redrawn_resamples};
        char* json = json_out ? dup(cvlab::report_json(r)) : nullptr;
        char* csv = nullptr;
        try {
            csv = csv_out ? dup(cvlab::report_csv(r)) : nullptr;
        } catch (...) {
            std::free(json);
            throw;
        }
        if (json_out) *json_out = json;
        if (csv_out) *csv_out = csv;
    });
}

cvlab_status cvlab_verify(int64_t n_max, int perturb, cvlab_identity_cb cb, void* user, size_t* failed) {
    return guard([&] {
        cvlab::UnseenPmf pmf = cvlab::pmf_unseen_count;
        if (perturb) {
            pmf = [](std::int64_t n, std::int64_t m, std::int64_t k) {
                cvlab::ExactRational v = cvlab::pmf_unseen_count(n, m, k);
                if (k == 1) v += cvlab::ExactRational(1, 1000000);
                return v;
            };
        }
        std::size_t bad = 0;
        for (const auto& check : cvlab::verify_identities(n_max, pmf)) {
            bad += !check.passed;
            if (cb) cb(check.identity.c_str(), check.n, check.passed ? 1 : 0, user);
        }
        if (failed) *failed = bad;
    });
}

cvlab_status cvlab_decompose(const double* s, const double* s_hat, size_t T, cvlab_decomposition* out) {
    if (!s || !s_hat || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] {
        const cvlab::PairedPerformanceSample sample(std::vector<double>(s, s + T),
                                                    std::vector<double>(s_hat, s_hat + T));
        fill(cvlab::decompose(sample), out);
    });
}

cvlab_status cvlab_decompose_csv(const char* path, cvlab_decomposition* out, char** json_out,
                                 char** csv_out) {
    if (!path || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] {
        const cvlab::DecompositionReport d = cvlab::decompose(cvlab::read_paired_csv(path));
        fill(d, out);
        char* json = json_out ? dup(cvlab::decomposition_json(d)) : nullptr;
        char* csv = nullptr;
        try {
            csv = csv_out ? dup(cvlab::decomposition_csv(d)) : nullptr;
        } catch (...) {
            std::free(json);
            throw;
        }
        if (json_out) *json_out = json;
        if (csv_out) *csv_out = csv;
    });
}

void cvlab_simulate_config_init(cvlab_simulate_config* c) {
    if (!c) return;
    *c = cvlab_simulate_config{};
    const cvlab::WeakCorrConfig d;
    c->p = d.spec.p;
    c->delta = d.spec.delta;
    c->n1 = d.spec.n1;
    c->n2 = d.spec.n2;
    c->trials = d.trials;
    c->test_per_class = d.test_per_class;
    cvlab_estimator_config_init(&c->estimator);
    c->estimator.version = CVLAB_LOOB;
    c->estimator.variant = CVLAB_PARTITIONED;
    c->estimator.metric = CVLAB_AUC;
    c->estimator.B = d.estimator.B;
    c->trainer = CVLAB_TRAINER_LDA;
    c->ridge = d.trainer.ridge;
    c->threads = 1;
}

cvlab_status cvlab_simulate(const cvlab_simulate_config* c, cvlab_simulation** out) {
    if (!c || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] {
        cvlab::WeakCorrConfig w;
        w.spec = {c->p, c->delta, c->n1, c->n2};
        w.trials = c->trials;
        w.test_per_class = c->test_per_class;
        w.estimator = to_cpp(c->estimator);
        w.trainer = trainer_spec(c->trainer, c->ridge);
        w.seed = c->seed;
        w.threads = c->threads;
        *out = new cvlab_simulation{cvlab::run_weak_correlation(w)};
    });
}

size_t cvlab_simulation_role_count(const cvlab_simulation* s) { return s ? s->result.row.roles.size() : 0; }

cvlab_status cvlab_simulation_role(const cvlab_simulation* s, size_t i, cvlab_role_summary* out) {
    if (!s || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    if (i >= s->result.row.roles.size()) return fail(CVLAB_E_ARGUMENT, "role index out of range");
    const auto& r = s->result.row.roles[i];
    *out = {r.role.c_str(), r.mean, r.sigma, r.rms_cond, r.rms_mean, r.rho};
    return CVLAB_OK;
}

size_t cvlab_simulation_triple_count(const cvlab_simulation* s) { return s ? s->result.triples.size() : 0; }

cvlab_status cvlab_simulation_triple(const cvlab_simulation* s, size_t i, cvlab_triple* out) {
    if (!s || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    if (i >= s->result.triples.size()) return fail(CVLAB_E_ARGUMENT, "trial index out of range");
    const auto& t = s->result.triples[i];
    *out = {t.trial, t.s, t.s_bar, t.s_hat};
    return CVLAB_OK;
}

size_t cvlab_simulation_aborted(const cvlab_simulation* s) { return s ? s->result.row.aborted : 0; }

cvlab_status cvlab_simulation_decomposition(const cvlab_simulation* s, cvlab_decomposition* out) {
    if (!s || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    fill(s->result.row.shat_decomposition, out);
    return CVLAB_OK;
}

cvlab_status cvlab_simulation_table_csv(const cvlab_simulation* s, char** out) {
    if (!s || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] { *out = dup(cvlab::experiment_table_csv(s->result.row)); });
}

cvlab_status cvlab_simulation_triples_csv(const cvlab_simulation* s, char** out) {
    if (!s || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] { *out = dup(cvlab::triples_csv(s->result.triples)); });
}

void cvlab_simulation_free(cvlab_simulation* s) { delete s; }

void cvlab_ratio_config_init(cvlab_ratio_config* c) {
    if (!c) return;
    *c = cvlab_ratio_config{};
    c->trainer = CVLAB_TRAINER_LDA;
    c->ridge = 1e-6;
    c->B = 200;
    c->model = CVLAB_ORDERED;
    c->replicates = 100;
    c->threads = 1;
}

cvlab_status cvlab_ratio_curve_run(const cvlab_ratio_config* c, cvlab_ratio_curve** out) {
    if (!c || !out || (!c->n1_grid && c->grid_len)) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] {
        if (!enum_ok(c->model, CVLAB_UNORDERED_MULTISET)) throw ArgumentError("unknown sampling model");
        cvlab::RatioCurveConfig r;
        r.n1_grid.assign(c->n1_grid, c->n1_grid + c->grid_len);
        r.trainer = trainer_spec(c->trainer, c->ridge);
        r.B = c->B;
        r.model = static_cast<cvlab::SamplingModel>(c->model);
        r.replicates = c->replicates;
        r.seed = c->seed;
        r.threads = c->threads;
        *out = new cvlab_ratio_curve{cvlab::run_ratio_curve(r)};
    });
}

size_t cvlab_ratio_curve_size(const cvlab_ratio_curve* r) { return r ? r->points.size() : 0; }

cvlab_status cvlab_ratio_curve_point(const cvlab_ratio_curve* r, size_t i, cvlab_ratio_point* out) {
    if (!r || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    if (i >= r->points.size()) return fail(CVLAB_E_ARGUMENT, "point index out of range");
    const auto& p = r->points[i];
    *out = {p.n1, p.mean_pooled, p.mean_partitioned, p.ratio_empirical, p.ratio_theory};
    return CVLAB_OK;
}

cvlab_status cvlab_ratio_curve_csv(const cvlab_ratio_curve* r, char** out) {
    if (!r || !out) return fail(CVLAB_E_ARGUMENT, "null argument");
    return guard([&] { *out = dup(cvlab::ratio_csv(r->points)); });
}

void cvlab_ratio_curve_free(cvlab_ratio_curve* r) { delete r; }

}  // extern "C"
