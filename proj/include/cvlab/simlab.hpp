#pragma once

// Simulated two-class normal data, the built-in trainers, and the two Monte-Carlo campaigns:
// weak correlation between estimates and the true conditional performance, and the ratio of
// the two leave-one-out bootstrap variants as a function of sample size.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvlab/analysis.hpp"
#include "cvlab/core.hpp"
#include "cvlab/estimators.hpp"
#include "cvlab/resampling.hpp"

namespace cvlab {

/// Class 1 ~ N(0, I_p), class 2 ~ N(c 1, I_p) with c = delta / sqrt(p), so the Mahalanobis
/// distance between the classes is delta.
struct MultinormalSpec {
    std::size_t p = 1;
    double delta = 0.0;
    std::size_t n1 = 1;
    std::size_t n2 = 1;

    double offset() const;
    /// Throws DomainError unless p, n1, n2 >= 1 and delta is finite and >= 0.
    void validate() const;
    friend bool operator==(const MultinormalSpec&, const MultinormalSpec&) = default;
};

StratifiedDataset gen_multinormal(const MultinormalSpec& spec, std::uint64_t seed);

/// Phi(x), the standard normal CDF.
double normal_cdf(double x);
/// AUC of the Bayes rule for equal-covariance normals: Phi(delta / sqrt(2)).
double bayes_auc(double delta);

/// score(x) = d'x - d'(m1 + m2)/2 with d = m2 - m1 (weighted class means).
class NearestMeanTrainer final : public Trainer {
public:
    std::string id() const override { return "nearest_mean"; }
    using Trainer::train;
    ScoringRule train(const StratifiedDataset& data, std::span<const std::uint32_t> w1,
                      std::span<const std::uint32_t> w2) const override;
};

/// score(x) = d'x - d'(m1 + m2)/2 with d = (S + ridge I)^{-1} (m2 - m1) and S the pooled
/// weighted covariance divided by N1 + N2 - 2.
class LdaTrainer final : public Trainer {
public:
    explicit LdaTrainer(double ridge = 1e-6);
    double ridge() const noexcept { return ridge_; }
    std::string id() const override;
    using Trainer::train;
    ScoringRule train(const StratifiedDataset& data, std::span<const std::uint32_t> w1,
                      std::span<const std::uint32_t> w2) const override;

private:
    double ridge_;
};

inline ScoringRule train_nearest_mean(const StratifiedDataset& data) {
    return NearestMeanTrainer{}.train(data);
}
inline ScoringRule train_lda(const StratifiedDataset& data, double ridge) {
    return LdaTrainer{ridge}.train(data);
}

enum class TrainerKind { Lda, NearestMean };

struct TrainerSpec {
    TrainerKind kind = TrainerKind::Lda;
    double ridge = 1e-6;
    friend bool operator==(const TrainerSpec&, const TrainerSpec&) = default;
};

std::string_view to_string(TrainerKind k) noexcept;
std::optional<TrainerKind> parse_trainer_kind(std::string_view s);
std::unique_ptr<Trainer> make_trainer(const TrainerSpec& spec);

/// AUC (or error rate at th) of the rule on a fresh sample of test_per_class points per class.
double true_conditional_performance(const ScoringRule& rule, const MultinormalSpec& spec,
                                    std::size_t test_per_class, std::uint64_t seed, Metric metric,
                                    double th = 0.0);

struct WeakCorrConfig {
    MultinormalSpec spec;
    std::size_t trials = 1000;
    std::size_t test_per_class = 1000;
    /// The per-trial estimator seed replaces estimator.seed.
    EstimatorConfig estimator = default_estimator();
    TrainerSpec trainer;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    static EstimatorConfig default_estimator();
};

struct RoleSummary {
    std::string role;  ///< "S", "Sbar" or "Shat"
    double mean = 0.0;
    double sigma = 0.0;
    double rms_cond = 0.0;
    double rms_mean = 0.0;
    double rho = 0.0;
};

struct TrialTriple {
    std::size_t trial = 0;
    double s = 0.0;
    double s_bar = 0.0;
    double s_hat = 0.0;
};

struct ExperimentRow {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::vector<RoleSummary> roles;  ///< S, Sbar, Shat in that order
    DecompositionReport shat_decomposition;
    DecompositionReport sbar_decomposition;
    std::size_t completed = 0;
    std::size_t aborted = 0;
};

struct WeakCorrResult {
    ExperimentRow row;
    std::vector<TrialTriple> triples;  ///< completed trials in trial order
};

/// Trial t uses seeds derived from (seed, t) only. A trial whose estimator or training fails is
/// aborted and counted; more than 1% aborted trials raises EstimationError.
WeakCorrResult run_weak_correlation(const WeakCorrConfig& config);

struct RatioCurveConfig {
    std::vector<std::size_t> n1_grid;  ///< n2 = n1
    TrainerSpec trainer;
    std::size_t B = 200;
    SamplingModel model = SamplingModel::Ordered;
    std::size_t replicates = 100;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct RatioPoint {
    std::size_t n1 = 0;
    double mean_pooled = 0.0;       ///< mean of Err^(1) over replicates
    double mean_partitioned = 0.0;  ///< mean of Err^(*) over replicates
    double ratio_empirical = 0.0;   ///< mean_partitioned / mean_pooled
    double ratio_theory = 0.0;      ///< (2n-2)/(2n-1) with n = 2 n1
    SamplingModel model = SamplingModel::Ordered;
};

/// One-dimensional data with class means 0 and 1 and unit variance; both LOOB error variants
/// per replicate, classifying at th = 0 (the trained rule's own midpoint).
std::vector<RatioPoint> run_ratio_curve(const RatioCurveConfig& config);

}  // namespace cvlab
