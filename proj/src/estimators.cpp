#include "cvlab/estimators.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "cvlab/errors.hpp"
#include "parallel.hpp"

namespace cvlab {

std::string_view to_string(Version v) noexcept {
    switch (v) {
        case Version::CVN: return "CVN";
        case Version::CVK: return "CVK";
        case Version::CVKR: return "CVKR";
        case Version::CVKM: return "CVKM";
        case Version::LOOB: return "LOOB";
    }
    return "?";
}

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::Pooled: return "Pooled";
        case Variant::Partitioned: return "Partitioned";
        case Variant::Reduced: return "Reduced";
    }
    return "?";
}

std::string_view to_string(Metric m) noexcept { return m == Metric::Error ? "Error" : "AUC"; }

std::string_view to_string(SamplingModel m) noexcept {
    return m == SamplingModel::Ordered ? "Ordered" : "UnorderedMultiset";
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

template <class E, std::size_t N>
std::optional<E> parse_enum(std::string_view s, const std::array<E, N>& values) {
    for (E v : values) {
        if (iequals(s, to_string(v))) return v;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Version> parse_version(std::string_view s) {
    return parse_enum(s, std::array{Version::CVN, Version::CVK, Version::CVKR, Version::CVKM,
                                    Version::LOOB});
}

std::optional<Variant> parse_variant(std::string_view s) {
    return parse_enum(s, std::array{Variant::Pooled, Variant::Partitioned, Variant::Reduced});
}

std::optional<Metric> parse_metric(std::string_view s) {
    return parse_enum(s, std::array{Metric::Error, Metric::AUC});
}

std::optional<SamplingModel> parse_sampling_model(std::string_view s) {
    return parse_enum(s, std::array{SamplingModel::Ordered, SamplingModel::UnorderedMultiset});
}

namespace {

using Weights = std::vector<std::uint32_t>;

/// Observations tested in one resample and their losses (or scores), in test order.
struct TestedLosses {
    std::vector<std::size_t> idx;
    std::vector<double> loss;
};

struct TestedScores {
    std::vector<std::size_t> idx1;
    std::vector<double> s1;
    std::vector<std::size_t> idx2;
    std::vector<double> s2;
};

ScoringRule fit(const Trainer& trainer, const StratifiedDataset& data, const Weights& w1,
                const Weights& w2, const std::string& where, std::size_t index) {
    try {
        return trainer.train(data, w1, w2);
    } catch (const TrainingError& e) {
        throw EstimationError("training failed on " + where + ": " + e.what(), index);
    }
}

double checked_score(const ScoringRule& rule, std::span<const double> x, const std::string& where,
                     std::size_t index) {
    const double s = rule.score(x);
    if (!std::isfinite(s)) throw EstimationError("non-finite score on " + where, index);
    return s;
}

void split_pooled(const StratifiedDataset& data, std::span<const std::uint32_t> pooled, Weights& w1,
                  Weights& w2) {
    w1.assign(pooled.begin(), pooled.begin() + static_cast<std::ptrdiff_t>(data.n1()));
    w2.assign(pooled.begin() + static_cast<std::ptrdiff_t>(data.n1()), pooled.end());
}

std::string where_fold(std::size_t k) { return "fold " + std::to_string(k); }
std::string where_run(std::size_t m, std::size_t k) {
    return "run " + std::to_string(m) + " fold " + std::to_string(k);
}
std::string where_replicate(std::size_t b) { return "replicate " + std::to_string(b); }

EstimatorReport make_report(double value, const EstimatorConfig& cfg, const Trainer& trainer) {
    EstimatorReport r;
    r.value = value;
    r.config = cfg;
    r.trainer = trainer.id();
    return r;
}

EstimatorConfig echo(Version v, Variant var, Metric metric, const ExecutionOptions& exec) {
    EstimatorConfig cfg;
    cfg.version = v;
    cfg.variant = var;
    cfg.metric = metric;
    cfg.exec = exec;
    return cfg;
}

void require_pooled_or_partitioned(Variant v) {
    if (v == Variant::Reduced) {
        throw DomainError("the Reduced variant exists only for the AUC CVK estimator");
    }
}

// ----------------------------------------------------------------------------------------
// Error-rate machinery

/// Loss of every observation when tested on the fold that excludes it.
std::vector<double> partition_losses(const StratifiedDataset& data, const Trainer& trainer,
                                     double th, const PartitionMap& part, unsigned threads,
                                     std::size_t run, bool repeated) {
    std::vector<double> loss(data.n(), 0.0);
    detail::parallel_for(part.folds(), threads, [&](std::size_t k) {
        const std::string where = repeated ? where_run(run, k) : where_fold(k);
        Weights w1, w2;
        split_pooled(data, part.training_weights(k), w1, w2);
        const ScoringRule rule = fit(trainer, data, w1, w2, where, repeated ? run : k);
        for (std::size_t i : part.members(k)) {
            const LabeledPoint pt = data.pooled_point(i);
            const double s = checked_score(rule, pt.features, where, repeated ? run : k);
            loss[i] = classify(s, th) == pt.label ? 0.0 : 1.0;
        }
    });
    return loss;
}

double fold_average(std::span<const double> loss, const PartitionMap& part) {
    double outer = 0.0;
    for (std::size_t k = 0; k < part.folds(); ++k) {
        double inner = 0.0;
        for (std::size_t i : part.members(k)) inner += loss[i];
        outer += inner / static_cast<double>(part.fold_size());
    }
    return outer / static_cast<double>(part.folds());
}

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

struct CoverageMean {
    double value = 0.0;
    std::size_t excluded = 0;
};

/// Per-observation ratio sum_r I_i^r Q_i^r / sum_r I_i^r, averaged over covered observations.
CoverageMean coverage_mean(std::size_t n, const std::vector<TestedLosses>& runs, bool strict,
                           const char* what) {
    std::vector<double> num(n, 0.0);
    std::vector<std::uint64_t> den(n, 0);
    for (const auto& r : runs) {
        for (std::size_t t = 0; t < r.idx.size(); ++t) {
            num[r.idx[t]] += r.loss[t];
            ++den[r.idx[t]];
        }
    }
    CoverageMean out;
    double sum = 0.0;
    std::size_t covered = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (den[i] == 0) {
            if (strict) {
                throw EstimationError(std::string(what) + ": observation " + std::to_string(i) +
                                      " was never tested (strict coverage)");
            }
            ++out.excluded;
            continue;
        }
        sum += num[i] / static_cast<double>(den[i]);
        ++covered;
    }
    if (covered == 0) throw EstimationError(std::string(what) + ": no observation was ever tested");
    out.value = sum / static_cast<double>(covered);
    return out;
}

/// Pairwise analogue of coverage_mean for AUC.
CoverageMean pair_coverage_mean(std::size_t n1, std::size_t n2,
                                const std::vector<TestedScores>& runs, bool strict,
                                const char* what) {
    std::vector<double> num(n1 * n2, 0.0);
    std::vector<std::uint64_t> den(n1 * n2, 0);
    for (const auto& r : runs) {
        for (std::size_t a = 0; a < r.idx1.size(); ++a) {
            const std::size_t row = r.idx1[a] * n2;
            for (std::size_t b = 0; b < r.idx2.size(); ++b) {
                num[row + r.idx2[b]] += mw_kernel(r.s1[a], r.s2[b]);
                ++den[row + r.idx2[b]];
            }
        }
    }
    CoverageMean out;
    double sum = 0.0;
    std::size_t covered = 0;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const std::size_t p = i * n2 + j;
            if (den[p] == 0) {
                if (strict) {
                    throw EstimationError(std::string(what) + ": pair (" + std::to_string(i) + ", " +
                                          std::to_string(j) + ") was never tested (strict coverage)");
                }
                ++out.excluded;
                continue;
            }
            sum += num[p] / static_cast<double>(den[p]);
            ++covered;
        }
    }
    if (covered == 0) throw EstimationError(std::string(what) + ": no pair was ever tested");
    out.value = sum / static_cast<double>(covered);
    return out;
}

struct DrawnReplicate {
    BootstrapReplicate rep;
    std::size_t redraws = 0;
};

/// Pooled-class replicate b; redrawn from a derived seed while it contains a single class.
DrawnReplicate draw_pooled_replicate(const StratifiedDataset& data, SamplingModel model,
                                     std::uint64_t seed, std::size_t b) {
    const std::uint64_t base = derive_seed(seed, streams::kBootstrap, b);
    for (std::size_t attempt = 0; attempt <= kMaxRedraws; ++attempt) {
        const std::uint64_t s =
            attempt == 0 ? base : derive_seed(base, streams::kBootstrapRetry, attempt);
        BootstrapReplicate rep = bootstrap_replicate(data.n(), model, s);
        const auto counts = rep.counts();
        const bool has1 = std::any_of(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(data.n1()),
                                      [](std::uint32_t c) { return c > 0; });
        const bool has2 = std::any_of(counts.begin() + static_cast<std::ptrdiff_t>(data.n1()), counts.end(),
                                      [](std::uint32_t c) { return c > 0; });
        if (has1 && has2) return {std::move(rep), attempt};
    }
    throw EstimationError(where_replicate(b) + " drew a single class " +
                              std::to_string(kMaxRedraws + 1) + " times",
                          b);
}

struct LoobRuns {
    std::vector<TestedLosses> runs;
    std::size_t redraws = 0;
};

LoobRuns loob_runs(const StratifiedDataset& data, const Trainer& trainer, double th, std::size_t B,
                   std::uint64_t seed, SamplingModel model, unsigned threads) {
    if (B == 0) throw DomainError("bootstrap estimators need B >= 1");
    if (data.n() < 2) throw DomainError("bootstrap estimators need n >= 2");
    LoobRuns out;
    out.runs.resize(B);
    std::vector<std::size_t> redraws(B, 0);
    detail::parallel_for(B, threads, [&](std::size_t b) {
        DrawnReplicate d = draw_pooled_replicate(data, model, seed, b);
        redraws[b] = d.redraws;
        Weights w1, w2;
        split_pooled(data, d.rep.counts(), w1, w2);
        const std::string where = where_replicate(b);
        const ScoringRule rule = fit(trainer, data, w1, w2, where, b);
        TestedLosses& r = out.runs[b];
        for (std::size_t i = 0; i < data.n(); ++i) {
            if (!d.rep.out_of_bag(i)) continue;
            const LabeledPoint pt = data.pooled_point(i);
            r.idx.push_back(i);
            r.loss.push_back(classify(checked_score(rule, pt.features, where, b), th) == pt.label ? 0.0
                                                                                                 : 1.0);
        }
    });
    for (std::size_t r : redraws) out.redraws += r;
    return out;
}

// ----------------------------------------------------------------------------------------
// AUC machinery

/// Scores of one K1 x K2 cross-validation run. s1[k2 * n1 + i] is the score of x_i under the
/// rule trained without fold(i) of class 1 and fold k2 of class 2; s2[k1 * n2 + j] likewise.
struct CvAucRun {
    std::vector<double> s1;
    std::vector<double> s2;
};

CvAucRun cv_auc_run(const StratifiedDataset& data, const Trainer& trainer, const PartitionMap& p1,
                    const PartitionMap& p2, bool diagonal_only, unsigned threads, std::size_t run,
                    bool repeated) {
    const std::size_t n1 = data.n1();
    const std::size_t n2 = data.n2();
    const std::size_t K1 = p1.folds();
    const std::size_t K2 = p2.folds();
    CvAucRun out{std::vector<double>(K2 * n1, 0.0), std::vector<double>(K1 * n2, 0.0)};
    const std::size_t blocks = diagonal_only ? K1 : K1 * K2;
    detail::parallel_for(blocks, threads, [&](std::size_t blk) {
        const std::size_t k1 = diagonal_only ? blk : blk / K2;
        const std::size_t k2 = diagonal_only ? blk : blk % K2;
        const std::string where = (repeated ? "run " + std::to_string(run) + " " : std::string{}) +
                                  "folds (" + std::to_string(k1) + ", " + std::to_string(k2) + ")";
        const std::size_t index = repeated ? run : blk;
        const ScoringRule rule =
            fit(trainer, data, p1.training_weights(k1), p2.training_weights(k2), where, index);
        for (std::size_t i : p1.members(k1)) {
            out.s1[k2 * n1 + i] = checked_score(rule, data.class1().row(i), where, index);
        }
        for (std::size_t j : p2.members(k2)) {
            out.s2[k1 * n2 + j] = checked_score(rule, data.class2().row(j), where, index);
        }
    });
    return out;
}

double block_auc(const CvAucRun& run, const PartitionMap& p1, const PartitionMap& p2,
                 std::size_t n1, std::size_t n2, std::size_t k1, std::size_t k2) {
    std::vector<double> a;
    std::vector<double> b;
    a.reserve(p1.fold_size());
    b.reserve(p2.fold_size());
    for (std::size_t i : p1.members(k1)) a.push_back(run.s1[k2 * n1 + i]);
    for (std::size_t j : p2.members(k2)) b.push_back(run.s2[k1 * n2 + j]);
    return empirical_auc(a, b);
}

/// Mean over fold pairs of the within-block AUC (the partitioned, "starred", CVK form).
double partitioned_cv_auc(const CvAucRun& run, const PartitionMap& p1, const PartitionMap& p2,
                          std::size_t n1, std::size_t n2) {
    double outer = 0.0;
    for (std::size_t k1 = 0; k1 < p1.folds(); ++k1) {
        for (std::size_t k2 = 0; k2 < p2.folds(); ++k2) outer += block_auc(run, p1, p2, n1, n2, k1, k2);
    }
    return outer / static_cast<double>(p1.folds() * p2.folds());
}

double reduced_cv_auc(const CvAucRun& run, const PartitionMap& p1, const PartitionMap& p2,
                      std::size_t n1, std::size_t n2) {
    double outer = 0.0;
    for (std::size_t k = 0; k < p1.folds(); ++k) outer += block_auc(run, p1, p2, n1, n2, k, k);
    return outer / static_cast<double>(p1.folds());
}

/// (1/(n1 n2)) sum_i sum_j (1/M) sum_m psi over the pair's own rule in each run.
double pooled_cv_auc(const std::vector<CvAucRun>& runs, const std::vector<PartitionMap>& p1,
                     const std::vector<PartitionMap>& p2, std::size_t n1, std::size_t n2) {
    const auto M = static_cast<double>(runs.size());
    double outer = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            double inner = 0.0;
            for (std::size_t m = 0; m < runs.size(); ++m) {
                const double si = runs[m].s1[p2[m].fold(j) * n1 + i];
                const double sj = runs[m].s2[p1[m].fold(i) * n2 + j];
                inner += mw_kernel(si, sj);
            }
            outer += inner / M;
        }
    }
    return outer / (static_cast<double>(n1) * static_cast<double>(n2));
}

void require_auc_sizes(const StratifiedDataset& data, const char* what) {
    if (data.n1() < 2 || data.n2() < 2) {
        throw DomainError(std::string(what) + " needs n1 >= 2 and n2 >= 2");
    }
}

struct LpobsRuns {
    std::vector<TestedScores> runs;
};

LpobsRuns lpobs_runs(const StratifiedDataset& data, const Trainer& trainer, std::size_t B,
                     std::uint64_t seed, SamplingModel model, unsigned threads) {
    if (B == 0) throw DomainError("bootstrap estimators need B >= 1");
    require_auc_sizes(data, "LPOBS");
    LpobsRuns out;
    out.runs.resize(B);
    detail::parallel_for(B, threads, [&](std::size_t b) {
        const BootstrapReplicate r1 =
            bootstrap_replicate(data.n1(), model, derive_seed(seed, streams::kBootstrapClass1, b));
        const BootstrapReplicate r2 =
            bootstrap_replicate(data.n2(), model, derive_seed(seed, streams::kBootstrapClass2, b));
        const std::string where = where_replicate(b);
        const Weights w1(r1.counts().begin(), r1.counts().end());
        const Weights w2(r2.counts().begin(), r2.counts().end());
        const ScoringRule rule = fit(trainer, data, w1, w2, where, b);
        TestedScores& t = out.runs[b];
        for (std::size_t i = 0; i < data.n1(); ++i) {
            if (!r1.out_of_bag(i)) continue;
            t.idx1.push_back(i);
            t.s1.push_back(checked_score(rule, data.class1().row(i), where, b));
        }
        for (std::size_t j = 0; j < data.n2(); ++j) {
            if (!r2.out_of_bag(j)) continue;
            t.idx2.push_back(j);
            t.s2.push_back(checked_score(rule, data.class2().row(j), where, b));
        }
    });
    return out;
}

}  // namespace

// ------------------------------------------------------------------------------------------
// Error rate

EstimatorReport err_cvn(const StratifiedDataset& data, const Trainer& trainer, double th,
                        const ExecutionOptions& exec) {
    const std::size_t n = data.n();
    if (n < 2) throw DomainError("CVN needs n >= 2");
    std::vector<double> loss(n, 0.0);
    detail::parallel_for(n, exec.threads, [&](std::size_t i) {
        Weights pooled(n, 1);
        pooled[i] = 0;
        Weights w1, w2;
        split_pooled(data, pooled, w1, w2);
        const std::string where = "left-out observation " + std::to_string(i);
        const ScoringRule rule = fit(trainer, data, w1, w2, where, i);
        const LabeledPoint pt = data.pooled_point(i);
        loss[i] = classify(checked_score(rule, pt.features, where, i), th) == pt.label ? 0.0 : 1.0;
    });
    auto cfg = echo(Version::CVN, Variant::Pooled, Metric::Error, exec);
    cfg.K = n;
    cfg.th = th;
    return make_report(mean(loss), cfg, trainer);
}

EstimatorReport err_cvk(const StratifiedDataset& data, const Trainer& trainer, double th,
                        std::size_t K, Variant variant,
                        std::optional<std::span<const std::size_t>> perm,
                        const ExecutionOptions& exec) {
    require_pooled_or_partitioned(variant);
    const PartitionMap part = make_partition(data.n(), K, perm);
    const std::vector<double> loss =
        partition_losses(data, trainer, th, part, exec.threads, 0, false);
    const double value = variant == Variant::Pooled ? mean(loss) : fold_average(loss, part);
    auto cfg = echo(Version::CVK, variant, Metric::Error, exec);
    cfg.K = K;
    cfg.th = th;
    return make_report(value, cfg, trainer);
}

EstimatorReport err_cvkr(const StratifiedDataset& data, const Trainer& trainer, double th,
                         std::size_t K, std::size_t M, std::uint64_t seed, Variant variant,
                         const ExecutionOptions& exec) {
    require_pooled_or_partitioned(variant);
    const RepeatedPartition rp = repeated_partitions(data.n(), K, M, seed);
    std::vector<std::vector<double>> losses(M);
    detail::parallel_for(M, exec.threads, [&](std::size_t m) {
        losses[m] = partition_losses(data, trainer, th, rp.maps[m], 1, m, true);
    });

    double value = 0.0;
    if (variant == Variant::Pooled) {
        for (std::size_t i = 0; i < data.n(); ++i) {
            double inner = 0.0;
            for (std::size_t m = 0; m < M; ++m) inner += losses[m][i];
            value += inner / static_cast<double>(M);
        }
        value /= static_cast<double>(data.n());
    } else {
        for (std::size_t m = 0; m < M; ++m) value += fold_average(losses[m], rp.maps[m]);
        value /= static_cast<double>(M);
    }
    auto cfg = echo(Version::CVKR, variant, Metric::Error, exec);
    cfg.K = K;
    cfg.M = M;
    cfg.seed = seed;
    cfg.th = th;
    return make_report(value, cfg, trainer);
}

EstimatorReport err_cvkm(const StratifiedDataset& data, const Trainer& trainer, double th,
                         std::size_t K, std::size_t M, std::uint64_t seed, Variant variant,
                         const ExecutionOptions& exec) {
    require_pooled_or_partitioned(variant);
    const RepeatedPartition rp = repeated_partitions(data.n(), K, M, seed);
    std::vector<TestedLosses> runs(M);
    detail::parallel_for(M, exec.threads, [&](std::size_t m) {
        const PartitionMap& part = rp.maps[m];
        Weights w1, w2;
        split_pooled(data, part.training_weights(0), w1, w2);
        const std::string where = where_run(m, 0);
        const ScoringRule rule = fit(trainer, data, w1, w2, where, m);
        for (std::size_t i : part.members(0)) {
            const LabeledPoint pt = data.pooled_point(i);
            runs[m].idx.push_back(i);
            runs[m].loss.push_back(classify(checked_score(rule, pt.features, where, m), th) == pt.label
                                       ? 0.0
                                       : 1.0);
        }
    });

    auto cfg = echo(Version::CVKM, variant, Metric::Error, exec);
    cfg.K = K;
    cfg.M = M;
    cfg.seed = seed;
    cfg.th = th;
    if (variant == Variant::Pooled) {
        const CoverageMean cm = coverage_mean(data.n(), runs, exec.strict, "CVKM");
        EstimatorReport r = make_report(cm.value, cfg, trainer);
        r.excluded_count = cm.excluded;
        return r;
    }
    double value = 0.0;
    for (const auto& run : runs) value += mean(run.loss);
    return make_report(value / static_cast<double>(M), cfg, trainer);
}

BootstrapVariants err_loob_variants(const StratifiedDataset& data, const Trainer& trainer,
                                    double th, std::size_t B, std::uint64_t seed,
                                    SamplingModel model, const ExecutionOptions& exec) {
    const LoobRuns lr = loob_runs(data, trainer, th, B, seed, model, exec.threads);

    auto cfg = echo(Version::LOOB, Variant::Pooled, Metric::Error, exec);
    cfg.B = B;
    cfg.seed = seed;
    cfg.model = model;
    cfg.th = th;

    const CoverageMean cm = coverage_mean(data.n(), lr.runs, exec.strict, "LOOB");
    BootstrapVariants out{make_report(cm.value, cfg, trainer), {}};
    out.pooled.excluded_count = cm.excluded;
    out.pooled.redrawn_resamples = lr.redraws;

    double sum = 0.0;
    std::size_t used = 0;
    std::size_t skipped = 0;
    for (const auto& r : lr.runs) {
        if (r.idx.empty()) {
            ++skipped;
            continue;
        }
        double inner = 0.0;
        for (double q : r.loss) inner += q;
        sum += inner / static_cast<double>(r.idx.size());
        ++used;
    }
    if (used == 0) throw EstimationError("LOOB: every replicate drew all observations");
    cfg.variant = Variant::Partitioned;
    out.partitioned = make_report(sum / static_cast<double>(used), cfg, trainer);
    out.partitioned.skipped_resamples = skipped;
    out.partitioned.redrawn_resamples = lr.redraws;
    return out;
}

EstimatorReport err_loob(const StratifiedDataset& data, const Trainer& trainer, double th,
                         std::size_t B, std::uint64_t seed, SamplingModel model, Variant variant,
                         const ExecutionOptions& exec) {
    require_pooled_or_partitioned(variant);
    BootstrapVariants v = err_loob_variants(data, trainer, th, B, seed, model, exec);
    return variant == Variant::Pooled ? std::move(v.pooled) : std::move(v.partitioned);
}

// ------------------------------------------------------------------------------------------
// AUC

EstimatorReport auc_cvn(const StratifiedDataset& data, const Trainer& trainer,
                        const ExecutionOptions& exec) {
    require_auc_sizes(data, "AUC CVN");
    const std::size_t n1 = data.n1();
    const std::size_t n2 = data.n2();
    std::vector<double> psi(n1 * n2, 0.0);
    detail::parallel_for(n1 * n2, exec.threads, [&](std::size_t p) {
        const std::size_t i = p / n2;
        const std::size_t j = p % n2;
        Weights w1(n1, 1);
        Weights w2(n2, 1);
        w1[i] = 0;
        w2[j] = 0;
        const std::string where = "left-out pair (" + std::to_string(i) + ", " + std::to_string(j) + ")";
        const ScoringRule rule = fit(trainer, data, w1, w2, where, p);
        psi[p] = mw_kernel(checked_score(rule, data.class1().row(i), where, p),
                           checked_score(rule, data.class2().row(j), where, p));
    });
    double sum = 0.0;
    for (double v : psi) sum += v;
    auto cfg = echo(Version::CVN, Variant::Pooled, Metric::AUC, exec);
    cfg.K1 = n1;
    cfg.K2 = n2;
    return make_report(sum / (static_cast<double>(n1) * static_cast<double>(n2)), cfg, trainer);
}

EstimatorReport auc_cvk(const StratifiedDataset& data, const Trainer& trainer, std::size_t K1,
                        std::size_t K2, Variant variant,
                        std::optional<std::span<const std::size_t>> perm1,
                        std::optional<std::span<const std::size_t>> perm2,
                        const ExecutionOptions& exec) {
    require_auc_sizes(data, "AUC CVK");
    if (variant == Variant::Reduced && K1 != K2) {
        throw DomainError("the Reduced AUC CVK variant requires K1 == K2 (got " +
                          std::to_string(K1) + " and " + std::to_string(K2) + ")");
    }
    const PartitionMap p1 = make_partition(data.n1(), K1, perm1);
    const PartitionMap p2 = make_partition(data.n2(), K2, perm2);
    const bool reduced = variant == Variant::Reduced;
    const CvAucRun run = cv_auc_run(data, trainer, p1, p2, reduced, exec.threads, 0, false);

    double value = 0.0;
    switch (variant) {
        case Variant::Pooled:
            value = pooled_cv_auc({run}, {p1}, {p2}, data.n1(), data.n2());
            break;
        case Variant::Partitioned:
            value = partitioned_cv_auc(run, p1, p2, data.n1(), data.n2());
            break;
        case Variant::Reduced:
            value = reduced_cv_auc(run, p1, p2, data.n1(), data.n2());
            break;
    }
    auto cfg = echo(Version::CVK, variant, Metric::AUC, exec);
    cfg.K1 = K1;
    cfg.K2 = K2;
    return make_report(value, cfg, trainer);
}

EstimatorReport auc_cvkr(const StratifiedDataset& data, const Trainer& trainer, std::size_t K1,
                         std::size_t K2, std::size_t M, std::uint64_t seed, Variant variant,
                         const ExecutionOptions& exec) {
    require_pooled_or_partitioned(variant);
    require_auc_sizes(data, "AUC CVKR");
    const RepeatedPartition rp1 =
        repeated_partitions(data.n1(), K1, M, seed, streams::kPartitionClass1);
    const RepeatedPartition rp2 =
        repeated_partitions(data.n2(), K2, M, seed, streams::kPartitionClass2);
    std::vector<CvAucRun> runs(M);
    detail::parallel_for(M, exec.threads, [&](std::size_t m) {
        runs[m] = cv_auc_run(data, trainer, rp1.maps[m], rp2.maps[m], false, 1, m, true);
    });

    double value = 0.0;
    if (variant == Variant::Pooled) {
        value = pooled_cv_auc(runs, rp1.maps, rp2.maps, data.n1(), data.n2());
    } else {
        for (std::size_t m = 0; m < M; ++m) {
            value += partitioned_cv_auc(runs[m], rp1.maps[m], rp2.maps[m], data.n1(), data.n2());
        }
        value /= static_cast<double>(M);
    }
    auto cfg = echo(Version::CVKR, variant, Metric::AUC, exec);
    cfg.K1 = K1;
    cfg.K2 = K2;
    cfg.M = M;
    cfg.seed = seed;
    return make_report(value, cfg, trainer);
}

EstimatorReport auc_cvkm(const StratifiedDataset& data, const Trainer& trainer, std::size_t K1,
                         std::size_t K2, std::size_t M, std::uint64_t seed, Variant variant,
                         const ExecutionOptions& exec) {
    require_pooled_or_partitioned(variant);
    require_auc_sizes(data, "AUC CVKM");
    const RepeatedPartition rp1 =
        repeated_partitions(data.n1(), K1, M, seed, streams::kPartitionClass1);
    const RepeatedPartition rp2 =
        repeated_partitions(data.n2(), K2, M, seed, streams::kPartitionClass2);
    std::vector<TestedScores> runs(M);
    detail::parallel_for(M, exec.threads, [&](std::size_t m) {
        const PartitionMap& p1 = rp1.maps[m];
        const PartitionMap& p2 = rp2.maps[m];
        const std::string where = where_run(m, 0);
        const ScoringRule rule =
            fit(trainer, data, p1.training_weights(0), p2.training_weights(0), where, m);
        TestedScores& t = runs[m];
        for (std::size_t i : p1.members(0)) {
            t.idx1.push_back(i);
            t.s1.push_back(checked_score(rule, data.class1().row(i), where, m));
        }
        for (std::size_t j : p2.members(0)) {
            t.idx2.push_back(j);
            t.s2.push_back(checked_score(rule, data.class2().row(j), where, m));
        }
    });

    auto cfg = echo(Version::CVKM, variant, Metric::AUC, exec);
    cfg.K1 = K1;
    cfg.K2 = K2;
    cfg.M = M;
    cfg.seed = seed;
    if (variant == Variant::Pooled) {
        const CoverageMean cm = pair_coverage_mean(data.n1(), data.n2(), runs, exec.strict, "AUC CVKM");
        EstimatorReport r = make_report(cm.value, cfg, trainer);
        r.excluded_count = cm.excluded;
        return r;
    }
    double value = 0.0;
    for (const auto& t : runs) value += empirical_auc(t.s1, t.s2);
    return make_report(value / static_cast<double>(M), cfg, trainer);
}

namespace {

BootstrapVariants lpobs_variants(const StratifiedDataset& data, const Trainer& trainer,
                                 std::size_t B, std::uint64_t seed, SamplingModel model,
                                 const ExecutionOptions& exec, bool want_pooled) {
    const LpobsRuns lr = lpobs_runs(data, trainer, B, seed, model, exec.threads);
    auto cfg = echo(Version::LOOB, Variant::Pooled, Metric::AUC, exec);
    cfg.B = B;
    cfg.seed = seed;
    cfg.model = model;

    BootstrapVariants out;
    if (want_pooled) {
        const CoverageMean cm =
            pair_coverage_mean(data.n1(), data.n2(), lr.runs, exec.strict, "LPOBS");
        out.pooled = make_report(cm.value, cfg, trainer);
        out.pooled.excluded_count = cm.excluded;
    }

    double sum = 0.0;
    std::size_t used = 0;
    std::size_t skipped = 0;
    for (const auto& t : lr.runs) {
        if (t.idx1.empty() || t.idx2.empty()) {
            ++skipped;
            continue;
        }
        sum += empirical_auc(t.s1, t.s2);
        ++used;
    }
    if (used == 0) throw EstimationError("LPOBS: no replicate left out observations of both classes");
    cfg.variant = Variant::Partitioned;
    out.partitioned = make_report(sum / static_cast<double>(used), cfg, trainer);
    out.partitioned.skipped_resamples = skipped;
    return out;
}

}  // namespace

BootstrapVariants auc_lpobs_variants(const StratifiedDataset& data, const Trainer& trainer,
                                     std::size_t B, std::uint64_t seed, SamplingModel model,
                                     const ExecutionOptions& exec) {
    return lpobs_variants(data, trainer, B, seed, model, exec, true);
}

EstimatorReport auc_lpobs(const StratifiedDataset& data, const Trainer& trainer, std::size_t B,
                          std::uint64_t seed, SamplingModel model, Variant variant,
                          const ExecutionOptions& exec) {
    require_pooled_or_partitioned(variant);
    BootstrapVariants v =
        lpobs_variants(data, trainer, B, seed, model, exec, variant == Variant::Pooled);
    return variant == Variant::Pooled ? std::move(v.pooled) : std::move(v.partitioned);
}

// ------------------------------------------------------------------------------------------

EstimatorReport estimate(const StratifiedDataset& data, const Trainer& trainer,
                         const EstimatorConfig& c) {
    if (c.variant == Variant::Reduced &&
        !(c.metric == Metric::AUC && c.version == Version::CVK)) {
        throw DomainError("the Reduced variant exists only for the AUC CVK estimator");
    }
    EstimatorReport r;
    if (c.metric == Metric::Error) {
        switch (c.version) {
            case Version::CVN: r = err_cvn(data, trainer, c.th, c.exec); break;
            case Version::CVK: r = err_cvk(data, trainer, c.th, c.K, c.variant, std::nullopt, c.exec); break;
            case Version::CVKR: r = err_cvkr(data, trainer, c.th, c.K, c.M, c.seed, c.variant, c.exec); break;
            case Version::CVKM: r = err_cvkm(data, trainer, c.th, c.K, c.M, c.seed, c.variant, c.exec); break;
            case Version::LOOB: r = err_loob(data, trainer, c.th, c.B, c.seed, c.model, c.variant, c.exec); break;
        }
    } else {
        switch (c.version) {
            case Version::CVN: r = auc_cvn(data, trainer, c.exec); break;
            case Version::CVK:
                r = auc_cvk(data, trainer, c.K1, c.K2, c.variant, std::nullopt, std::nullopt, c.exec);
                break;
            case Version::CVKR: r = auc_cvkr(data, trainer, c.K1, c.K2, c.M, c.seed, c.variant, c.exec); break;
            case Version::CVKM: r = auc_cvkm(data, trainer, c.K1, c.K2, c.M, c.seed, c.variant, c.exec); break;
            case Version::LOOB: r = auc_lpobs(data, trainer, c.B, c.seed, c.model, c.variant, c.exec); break;
        }
    }
    // Echo the caller's full configuration, keeping what the estimator itself filled in for
    // implied parameters (K = n for CVN).
    EstimatorConfig echoed = c;
    if (c.version == Version::CVN) {
        echoed.K = r.config.K;
        echoed.K1 = r.config.K1;
        echoed.K2 = r.config.K2;
    }
    if (c.version == Version::CVN) echoed.variant = Variant::Pooled;
    r.config = echoed;
    return r;
}

}  // namespace cvlab
