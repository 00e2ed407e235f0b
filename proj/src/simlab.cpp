#include "cvlab/simlab.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "cvlab/errors.hpp"
#include "parallel.hpp"

namespace cvlab {

double MultinormalSpec::offset() const { return delta / std::sqrt(static_cast<double>(p)); }

void MultinormalSpec::validate() const {
    if (p < 1) throw DomainError("p must be >= 1");
    if (n1 < 1 || n2 < 1) throw DomainError("n1 and n2 must be >= 1");
    if (!std::isfinite(delta) || delta < 0.0) throw DomainError("delta must be finite and >= 0");
}

StratifiedDataset gen_multinormal(const MultinormalSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed);
    const double c = spec.offset();
    FeatureMatrix x1(spec.n1, spec.p);
    FeatureMatrix x2(spec.n2, spec.p);
    for (std::size_t i = 0; i < spec.n1; ++i) {
        for (double& v : x1.row(i)) v = rng.normal();
    }
    for (std::size_t i = 0; i < spec.n2; ++i) {
        for (double& v : x2.row(i)) v = c + rng.normal();
    }
    return StratifiedDataset(std::move(x1), std::move(x2));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double bayes_auc(double delta) { return normal_cdf(delta / std::sqrt(2.0)); }

namespace {

struct WeightedMeans {
    Eigen::VectorXd m1;
    Eigen::VectorXd m2;
    double N1 = 0.0;
    double N2 = 0.0;
};

void check_weights(const StratifiedDataset& data, std::span<const std::uint32_t> w1,
                   std::span<const std::uint32_t> w2) {
    if (w1.size() != data.n1() || w2.size() != data.n2()) {
        throw DomainError("weight vectors do not match the class sizes");
    }
}

void accumulate_mean(const FeatureMatrix& x, std::span<const std::uint32_t> w, Eigen::VectorXd& m,
                     double& N) {
    m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(x.cols()));
    N = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        if (w[i] == 0) continue;
        const auto r = x.row(i);
        for (std::size_t d = 0; d < r.size(); ++d) m[static_cast<Eigen::Index>(d)] += w[i] * r[d];
        N += w[i];
    }
    if (N == 0.0) throw TrainingError("a class has zero total training weight");
    m /= N;
}

WeightedMeans weighted_means(const StratifiedDataset& data, std::span<const std::uint32_t> w1,
                             std::span<const std::uint32_t> w2) {
    check_weights(data, w1, w2);
    WeightedMeans out;
    accumulate_mean(data.class1(), w1, out.m1, out.N1);
    accumulate_mean(data.class2(), w2, out.m2, out.N2);
    return out;
}

ScoringRule linear_rule(Eigen::VectorXd d, double bias) {
    const std::size_t dim = static_cast<std::size_t>(d.size());
    for (Eigen::Index k = 0; k < d.size(); ++k) {
        if (!std::isfinite(d[k])) throw TrainingError("non-finite discriminant coefficient");
    }
    if (!std::isfinite(bias)) throw TrainingError("non-finite discriminant offset");
    std::vector<double> coef(d.data(), d.data() + d.size());
    return ScoringRule(dim, [coef = std::move(coef), bias](std::span<const double> x) {
        double s = bias;
        for (std::size_t k = 0; k < coef.size(); ++k) s += coef[k] * x[k];
        return s;
    });
}

void add_scatter(const FeatureMatrix& x, std::span<const std::uint32_t> w, const Eigen::VectorXd& m,
                 Eigen::MatrixXd& S) {
    Eigen::VectorXd diff(m.size());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        if (w[i] == 0) continue;
        const auto r = x.row(i);
        for (Eigen::Index d = 0; d < m.size(); ++d) diff[d] = r[static_cast<std::size_t>(d)] - m[d];
        S.selfadjointView<Eigen::Lower>().rankUpdate(diff, static_cast<double>(w[i]));
    }
}

}  // namespace

ScoringRule NearestMeanTrainer::train(const StratifiedDataset& data,
                                      std::span<const std::uint32_t> w1,
                                      std::span<const std::uint32_t> w2) const {
    const WeightedMeans wm = weighted_means(data, w1, w2);
    Eigen::VectorXd d = wm.m2 - wm.m1;
    const double bias = -0.5 * d.dot(wm.m1 + wm.m2);
    return linear_rule(std::move(d), bias);
}

LdaTrainer::LdaTrainer(double ridge) : ridge_(ridge) {
    if (!std::isfinite(ridge) || ridge < 0.0) throw DomainError("LDA ridge must be finite and >= 0");
}

std::string LdaTrainer::id() const {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, ridge_);
    return "lda(ridge=" + std::string(buf, res.ptr) + ")";
}

ScoringRule LdaTrainer::train(const StratifiedDataset& data, std::span<const std::uint32_t> w1,
                              std::span<const std::uint32_t> w2) const {
    const WeightedMeans wm = weighted_means(data, w1, w2);
    const double dof = wm.N1 + wm.N2 - 2.0;
    if (dof <= 0.0) throw TrainingError("LDA needs a total training weight above 2");

    const auto p = static_cast<Eigen::Index>(data.dim());
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(p, p);
    add_scatter(data.class1(), w1, wm.m1, S);
    add_scatter(data.class2(), w2, wm.m2, S);
    S = S.selfadjointView<Eigen::Lower>();
    S /= dof;
    S.diagonal().array() += ridge_;

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        (ldlt.vectorD().array() <= 0.0).any()) {
        throw TrainingError("pooled covariance is singular");
    }
    Eigen::VectorXd d = ldlt.solve(wm.m2 - wm.m1);
    const double bias = -0.5 * d.dot(wm.m1 + wm.m2);
    return linear_rule(std::move(d), bias);
}

std::string_view to_string(TrainerKind k) noexcept {
    return k == TrainerKind::Lda ? "lda" : "nearest_mean";
}

std::optional<TrainerKind> parse_trainer_kind(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "lda") return TrainerKind::Lda;
    if (lower == "nearest_mean") return TrainerKind::NearestMean;
    return std::nullopt;
}

std::unique_ptr<Trainer> make_trainer(const TrainerSpec& spec) {
    if (spec.kind == TrainerKind::NearestMean) return std::make_unique<NearestMeanTrainer>();
    return std::make_unique<LdaTrainer>(spec.ridge);
}

double true_conditional_performance(const ScoringRule& rule, const MultinormalSpec& spec,
                                    std::size_t test_per_class, std::uint64_t seed, Metric metric,
                                    double th) {
    if (test_per_class < 1) throw DomainError("test_per_class must be >= 1");
    MultinormalSpec test = spec;
    test.n1 = test_per_class;
    test.n2 = test_per_class;
    const StratifiedDataset data = gen_multinormal(test, seed);

    std::vector<double> s1(test_per_class), s2(test_per_class);
    for (std::size_t i = 0; i < test_per_class; ++i) {
        s1[i] = rule.score(data.class1().row(i));
        s2[i] = rule.score(data.class2().row(i));
    }
    if (metric == Metric::AUC) return empirical_auc(s1, s2);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < test_per_class; ++i) {
        wrong += classify(s1[i], th) != ClassLabel::One;
        wrong += classify(s2[i], th) != ClassLabel::Two;
    }
    return static_cast<double>(wrong) / static_cast<double>(2 * test_per_class);
}

namespace {

double apparent_performance(const ScoringRule& rule, const StratifiedDataset& data, Metric metric,
                            double th) {
    std::vector<double> s1(data.n1()), s2(data.n2());
    for (std::size_t i = 0; i < data.n1(); ++i) s1[i] = rule.score(data.class1().row(i));
    for (std::size_t j = 0; j < data.n2(); ++j) s2[j] = rule.score(data.class2().row(j));
    if (metric == Metric::AUC) return empirical_auc(s1, s2);
    std::size_t wrong = 0;
    for (double s : s1) wrong += classify(s, th) != ClassLabel::One;
    for (double s : s2) wrong += classify(s, th) != ClassLabel::Two;
    return static_cast<double>(wrong) / static_cast<double>(data.n());
}

RoleSummary summarize(std::string role, const DecompositionReport& d) {
    return {std::move(role), d.mean_s_hat, d.sigma_s_hat, d.rms_cond, d.rms_mean, d.rho};
}

}  // namespace

EstimatorConfig WeakCorrConfig::default_estimator() {
    EstimatorConfig c;
    c.version = Version::LOOB;
    c.variant = Variant::Partitioned;
    c.metric = Metric::AUC;
    c.B = 200;
    c.model = SamplingModel::Ordered;
    return c;
}

WeakCorrResult run_weak_correlation(const WeakCorrConfig& config) {
    config.spec.validate();
    if (config.trials < 2) throw DomainError("trials must be >= 2");
    if (config.test_per_class < 1) throw DomainError("test_per_class must be >= 1");
    const auto trainer = make_trainer(config.trainer);
    const Metric metric = config.estimator.metric;
    const double th = config.estimator.th;

    struct Slot {
        bool ok = false;
        TrialTriple triple;
    };
    std::vector<Slot> slots(config.trials);
    detail::parallel_for(config.trials, config.threads, [&](std::size_t t) {
        const std::uint64_t trial_seed = derive_seed(config.seed, streams::kTrial, t);
        const StratifiedDataset train =
            gen_multinormal(config.spec, derive_seed(trial_seed, streams::kTrainingData, 0));
        EstimatorConfig est = config.estimator;
        est.seed = derive_seed(trial_seed, streams::kEstimator, 0);
        est.exec.threads = 1;
        try {
            const ScoringRule rule = trainer->train(train);
            Slot& slot = slots[t];
            slot.triple.trial = t;
            slot.triple.s = true_conditional_performance(
                rule, config.spec, config.test_per_class,
                derive_seed(trial_seed, streams::kTestData, 0), metric, th);
            slot.triple.s_bar = apparent_performance(rule, train, metric, th);
            slot.triple.s_hat = estimate(train, *trainer, est).value;
            slot.ok = true;
        } catch (const EstimationError&) {
        } catch (const TrainingError&) {
        }
    });

    WeakCorrResult out;
    out.row.n1 = config.spec.n1;
    out.row.n2 = config.spec.n2;
    for (const Slot& slot : slots) {
        if (slot.ok) {
            out.triples.push_back(slot.triple);
        } else {
            ++out.row.aborted;
        }
    }
    out.row.completed = out.triples.size();
    if (out.row.aborted * 100 > config.trials) {
        throw EstimationError(std::to_string(out.row.aborted) + " of " +
                              std::to_string(config.trials) + " trials aborted (limit 1%)");
    }
    if (out.row.completed < 2) throw EstimationError("fewer than 2 trials completed");

    std::vector<double> s, s_bar, s_hat;
    for (const auto& tr : out.triples) {
        s.push_back(tr.s);
        s_bar.push_back(tr.s_bar);
        s_hat.push_back(tr.s_hat);
    }
    const DecompositionReport self = decompose(PairedPerformanceSample(s, s));
    out.row.sbar_decomposition = decompose(PairedPerformanceSample(s, s_bar));
    out.row.shat_decomposition = decompose(PairedPerformanceSample(s, s_hat));
    out.row.roles.push_back(summarize("S", self));
    out.row.roles.push_back(summarize("Sbar", out.row.sbar_decomposition));
    out.row.roles.push_back(summarize("Shat", out.row.shat_decomposition));
    return out;
}

std::vector<RatioPoint> run_ratio_curve(const RatioCurveConfig& config) {
    if (config.n1_grid.empty()) throw DomainError("n1 grid is empty");
    if (config.B < 1) throw DomainError("B must be >= 1");
    if (config.replicates < 1) throw DomainError("replicates must be >= 1");
    const auto trainer = make_trainer(config.trainer);

    std::vector<RatioPoint> out;
    for (std::size_t g = 0; g < config.n1_grid.size(); ++g) {
        const std::size_t n1 = config.n1_grid[g];
        const MultinormalSpec spec{1, 1.0, n1, n1};
        spec.validate();
        const std::uint64_t point_seed = derive_seed(config.seed, streams::kRatioReplicate, n1);

        std::vector<double> pooled(config.replicates), partitioned(config.replicates);
        detail::parallel_for(config.replicates, config.threads, [&](std::size_t r) {
            const StratifiedDataset data =
                gen_multinormal(spec, derive_seed(point_seed, streams::kTrainingData, r));
            const BootstrapVariants v = err_loob_variants(
                data, *trainer, 0.0, config.B, derive_seed(point_seed, streams::kEstimator, r),
                config.model, ExecutionOptions{false, 1});
            pooled[r] = v.pooled.value;
            partitioned[r] = v.partitioned.value;
        });

        RatioPoint pt;
        pt.n1 = n1;
        pt.model = config.model;
        for (std::size_t r = 0; r < config.replicates; ++r) {
            pt.mean_pooled += pooled[r];
            pt.mean_partitioned += partitioned[r];
        }
        pt.mean_pooled /= static_cast<double>(config.replicates);
        pt.mean_partitioned /= static_cast<double>(config.replicates);
        pt.ratio_empirical = pt.mean_partitioned / pt.mean_pooled;
        const double n = 2.0 * static_cast<double>(n1);
        pt.ratio_theory = (2.0 * n - 2.0) / (2.0 * n - 1.0);
        out.push_back(pt);
    }
    return out;
}

}  // namespace cvlab
