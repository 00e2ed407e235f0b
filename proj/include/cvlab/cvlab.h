#ifndef CVLAB_CVLAB_H
#define CVLAB_CVLAB_H

/* C interface to libcvlab.
 *
 * Objects are opaque handles created by *_create / *_run functions and released with the
 * matching *_free. Every fallible call returns a cvlab_status; on failure the message is
 * available from cvlab_last_error() on the same thread until the next failing call.
 * Strings returned through char** are heap copies released with cvlab_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CVLAB_API __declspec(dllexport)
#else
#define CVLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cvlab_status {
    CVLAB_OK = 0,
    CVLAB_E_ARGUMENT = 1,     /* null pointer or out-of-range enum */
    CVLAB_E_DOMAIN = 2,       /* invalid input data or configuration */
    CVLAB_E_DIVISIBILITY = 3, /* K does not divide n */
    CVLAB_E_TRAINING = 4,
    CVLAB_E_ESTIMATION = 5,
    CVLAB_E_IO = 6,
    CVLAB_E_INTERNAL = 7
} cvlab_status;

CVLAB_API const char* cvlab_last_error(void);
CVLAB_API const char* cvlab_version(void);
CVLAB_API void cvlab_string_free(char* s);

/* Writes `len` bytes to a temporary sibling and renames it onto `path`. */
CVLAB_API cvlab_status cvlab_write_file(const char* path, const char* data, size_t len);

/* ---- datasets */

typedef struct cvlab_dataset cvlab_dataset;

/* x1 is n1 x p and x2 is n2 x p, both row-major. */
CVLAB_API cvlab_status cvlab_dataset_create(size_t n1, size_t n2, size_t p, const double* x1,
                                            const double* x2, cvlab_dataset** out);
/* CSV with header class,f1,...,fp; class is 1 or 2. */
CVLAB_API cvlab_status cvlab_dataset_from_csv(const char* path, cvlab_dataset** out);
/* Class 1 ~ N(0, I), class 2 ~ N(delta/sqrt(p) 1, I). */
CVLAB_API cvlab_status cvlab_dataset_generate(size_t p, double delta, size_t n1, size_t n2,
                                              uint64_t seed, cvlab_dataset** out);
CVLAB_API cvlab_status cvlab_dataset_shape(const cvlab_dataset* d, size_t* n1, size_t* n2,
                                           size_t* p);
CVLAB_API cvlab_status cvlab_dataset_to_csv(const cvlab_dataset* d, char** out);
CVLAB_API void cvlab_dataset_free(cvlab_dataset* d);

/* ---- trainers */

typedef enum cvlab_trainer_kind { CVLAB_TRAINER_LDA = 0, CVLAB_TRAINER_NEAREST_MEAN = 1 } cvlab_trainer_kind;

typedef struct cvlab_trainer cvlab_trainer;

/* ridge is used by LDA only. */
CVLAB_API cvlab_status cvlab_trainer_create(cvlab_trainer_kind kind, double ridge, cvlab_trainer** out);
CVLAB_API void cvlab_trainer_free(cvlab_trainer* t);

/* ---- estimators */

typedef enum cvlab_version_kind {
    CVLAB_CVN = 0,
    CVLAB_CVK = 1,
    CVLAB_CVKR = 2,
    CVLAB_CVKM = 3,
    CVLAB_LOOB = 4 /* LPOBS for the AUC */
} cvlab_version_kind;

typedef enum cvlab_variant {
    CVLAB_POOLED = 0,
    CVLAB_PARTITIONED = 1,
    CVLAB_REDUCED = 2
} cvlab_variant;

typedef enum cvlab_metric { CVLAB_ERROR = 0, CVLAB_AUC = 1 } cvlab_metric;

typedef enum cvlab_sampling_model { CVLAB_ORDERED = 0, CVLAB_UNORDERED_MULTISET = 1 } cvlab_sampling_model;

typedef struct cvlab_estimator_config {
    cvlab_version_kind version;
    cvlab_variant variant;
    cvlab_metric metric;
    size_t K;
    size_t K1;
    size_t K2;
    size_t M;
    size_t B;
    uint64_t seed;
    cvlab_sampling_model model;
    double th;
    int strict;       /* nonzero: zero test coverage is an error */
    unsigned threads; /* 0 = hardware concurrency */
} cvlab_estimator_config;

CVLAB_API void cvlab_estimator_config_init(cvlab_estimator_config* c);

typedef struct cvlab_estimate_result {
    double value;
    size_t excluded_count;
    size_t skipped_resamples;
    size_t redrawn_resamples;
} cvlab_estimate_result;

/* json_out and csv_out may be NULL. */
CVLAB_API cvlab_status cvlab_estimate(const cvlab_dataset* d, const cvlab_trainer* t,
                                      const cvlab_estimator_config* c, cvlab_estimate_result* out,
                                      char** json_out, char** csv_out);

/* ---- exact identities */

typedef void (*cvlab_identity_cb)(const char* identity, int64_t n, int passed, void* user);

/* Runs every identity for 2 <= n <= n_max and reports each through cb (may be NULL).
 * perturb != 0 substitutes a deliberately wrong pmf to exercise the harness. */
CVLAB_API cvlab_status cvlab_verify(int64_t n_max, int perturb, cvlab_identity_cb cb, void* user,
                                    size_t* failed);

/* ---- decomposition */

typedef struct cvlab_decomposition {
    size_t T;
    double mean_s;
    double mean_s_hat;
    double sigma_s;
    double sigma_s_hat;
    double mse_cond;
    double mse_mean;
    double rms_cond;
    double rms_mean;
    double rho;
    double sigma_ratio;
    double lhs;
    double rhs;
    double residual;
    int degenerate;
} cvlab_decomposition;

CVLAB_API cvlab_status cvlab_decompose(const double* s, const double* s_hat, size_t T,
                                       cvlab_decomposition* out);
/* Two-column CSV with header s,s_hat. json_out and csv_out may be NULL. */
CVLAB_API cvlab_status cvlab_decompose_csv(const char* path, cvlab_decomposition* out,
                                           char** json_out, char** csv_out);

/* ---- weak-correlation campaign */

typedef struct cvlab_simulate_config {
    size_t p;
    double delta;
    size_t n1;
    size_t n2;
    size_t trials;
    size_t test_per_class;
    cvlab_estimator_config estimator; /* seed is replaced per trial */
    cvlab_trainer_kind trainer;
    double ridge;
    uint64_t seed;
    unsigned threads;
} cvlab_simulate_config;

CVLAB_API void cvlab_simulate_config_init(cvlab_simulate_config* c);

typedef struct cvlab_role_summary {
    const char* role; /* "S", "Sbar", "Shat"; owned by the simulation */
    double mean;
    double sigma;
    double rms_cond;
    double rms_mean;
    double rho;
} cvlab_role_summary;

typedef struct cvlab_triple {
    size_t trial;
    double s;
    double s_bar;
    double s_hat;
} cvlab_triple;

typedef struct cvlab_simulation cvlab_simulation;

CVLAB_API cvlab_status cvlab_simulate(const cvlab_simulate_config* c, cvlab_simulation** out);
CVLAB_API size_t cvlab_simulation_role_count(const cvlab_simulation* s);
CVLAB_API cvlab_status cvlab_simulation_role(const cvlab_simulation* s, size_t i, cvlab_role_summary* out);
CVLAB_API size_t cvlab_simulation_triple_count(const cvlab_simulation* s);
CVLAB_API cvlab_status cvlab_simulation_triple(const cvlab_simulation* s, size_t i, cvlab_triple* out);
CVLAB_API size_t cvlab_simulation_aborted(const cvlab_simulation* s);
/* Decomposition of Shat against S. */
CVLAB_API cvlab_status cvlab_simulation_decomposition(const cvlab_simulation* s, cvlab_decomposition* out);
CVLAB_API cvlab_status cvlab_simulation_table_csv(const cvlab_simulation* s, char** out);
CVLAB_API cvlab_status cvlab_simulation_triples_csv(const cvlab_simulation* s, char** out);
CVLAB_API void cvlab_simulation_free(cvlab_simulation* s);

/* ---- bootstrap variant ratio curve */

typedef struct cvlab_ratio_config {
    const size_t* n1_grid;
    size_t grid_len;
    cvlab_trainer_kind trainer;
    double ridge;
    size_t B;
    cvlab_sampling_model model;
    size_t replicates;
    uint64_t seed;
    unsigned threads;
} cvlab_ratio_config;

CVLAB_API void cvlab_ratio_config_init(cvlab_ratio_config* c);

typedef struct cvlab_ratio_point {
    size_t n1;
    double mean_pooled;
    double mean_partitioned;
    double ratio_empirical;
    double ratio_theory;
} cvlab_ratio_point;

typedef struct cvlab_ratio_curve cvlab_ratio_curve;

CVLAB_API cvlab_status cvlab_ratio_curve_run(const cvlab_ratio_config* c, cvlab_ratio_curve** out);
CVLAB_API size_t cvlab_ratio_curve_size(const cvlab_ratio_curve* r);
CVLAB_API cvlab_status cvlab_ratio_curve_point(const cvlab_ratio_curve* r, size_t i, cvlab_ratio_point* out);
CVLAB_API cvlab_status cvlab_ratio_curve_csv(const cvlab_ratio_curve* r, char** out);
CVLAB_API void cvlab_ratio_curve_free(cvlab_ratio_curve* r);

#ifdef __cplusplus
}
#endif

#endif
