#pragma once

// Cross-validation and bootstrap estimators of the error rate and the AUC.
//
// Error-rate estimators pool both classes into one set of n = n1 + n2 labelled points (see
// StratifiedDataset::pooled_point). AUC estimators always resample the two classes
// independently.
//
// Each version has a pooled variant (average over observations or pairs once) and a
// partitioned variant (average within each fold, run or replicate, then across them):
//
//   version  pooled == partitioned?
//   CVN      single variant
//   CVK      identical
//   CVKR     identical
//   CVKM     differ at finite M, agree as M grows
//   LOOB     differ, even as B grows
//
// Pooled CVKM, LOOB and LPOBS divide by per-observation (per-pair) test counts. Observations
// that were never tested are dropped and counted in EstimatorReport::excluded_count, or raise
// EstimationError in strict mode.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cvlab/core.hpp"
#include "cvlab/resampling.hpp"

namespace cvlab {

enum class Version { CVN, CVK, CVKR, CVKM, LOOB };
enum class Variant { Pooled, Partitioned, Reduced };
enum class Metric { Error, AUC };

std::string_view to_string(Version v) noexcept;
std::string_view to_string(Variant v) noexcept;
std::string_view to_string(Metric m) noexcept;
std::string_view to_string(SamplingModel m) noexcept;

/// Case-insensitive parsers; return nullopt for unknown names.
std::optional<Version> parse_version(std::string_view s);
std::optional<Variant> parse_variant(std::string_view s);
std::optional<Metric> parse_metric(std::string_view s);
std::optional<SamplingModel> parse_sampling_model(std::string_view s);

struct ExecutionOptions {
    bool strict = false;   ///< zero test coverage raises instead of drop-and-count
    unsigned threads = 1;  ///< worker cap; 0 means hardware concurrency

    friend bool operator==(const ExecutionOptions&, const ExecutionOptions&) = default;
};

/// Flat description of one estimator run, used by the dispatcher, the C API and the CLI.
struct EstimatorConfig {
    Version version = Version::CVK;
    Variant variant = Variant::Pooled;
    Metric metric = Metric::Error;
    std::size_t K = 0;   ///< error-rate fold count
    std::size_t K1 = 0;  ///< AUC fold count, class 1
    std::size_t K2 = 0;  ///< AUC fold count, class 2
    std::size_t M = 1;
    std::size_t B = 1;
    std::uint64_t seed = 0;
    SamplingModel model = SamplingModel::Ordered;
    double th = 0.0;
    ExecutionOptions exec;

    friend bool operator==(const EstimatorConfig&, const EstimatorConfig&) = default;
};

struct EstimatorReport {
    double value = 0.0;
    EstimatorConfig config;
    std::string trainer;
    std::size_t excluded_count = 0;     ///< observations or pairs dropped for zero test coverage
    std::size_t skipped_resamples = 0;  ///< replicates with an empty out-of-bag set (partitioned)
    std::size_t redrawn_resamples = 0;  ///< one-class bootstrap replicates that were redrawn
};

/// Bootstrap replicates containing a single class are redrawn at most this many times.
inline constexpr std::size_t kMaxRedraws = 100;

EstimatorReport err_cvn(const StratifiedDataset& data, const Trainer& trainer, double th = 0.0,
                        const ExecutionOptions& exec = {});

/// `perm`, when given, shuffles the contiguous fold map (see PartitionMap).
EstimatorReport err_cvk(const StratifiedDataset& data, const Trainer& trainer, double th,
                        std::size_t K, Variant variant,
                        std::optional<std::span<const std::size_t>> perm = std::nullopt,
                        const ExecutionOptions& exec = {});

EstimatorReport err_cvkr(const StratifiedDataset& data, const Trainer& trainer, double th,
                         std::size_t K, std::size_t M, std::uint64_t seed, Variant variant,
                         const ExecutionOptions& exec = {});

/// Each run shuffles the data and tests only on fold 0.
EstimatorReport err_cvkm(const StratifiedDataset& data, const Trainer& trainer, double th,
                         std::size_t K, std::size_t M, std::uint64_t seed, Variant variant,
                         const ExecutionOptions& exec = {});

/// Pooled: leave-one-out bootstrap Err^(1). Partitioned: Err^(*).
EstimatorReport err_loob(const StratifiedDataset& data, const Trainer& trainer, double th,
                         std::size_t B, std::uint64_t seed, SamplingModel model, Variant variant,
                         const ExecutionOptions& exec = {});

EstimatorReport auc_cvn(const StratifiedDataset& data, const Trainer& trainer,
                        const ExecutionOptions& exec = {});

/// Reduced trains only on matching fold indices and requires K1 == K2.
EstimatorReport auc_cvk(const StratifiedDataset& data, const Trainer& trainer, std::size_t K1,
                        std::size_t K2, Variant variant,
                        std::optional<std::span<const std::size_t>> perm1 = std::nullopt,
                        std::optional<std::span<const std::size_t>> perm2 = std::nullopt,
                        const ExecutionOptions& exec = {});

EstimatorReport auc_cvkr(const StratifiedDataset& data, const Trainer& trainer, std::size_t K1,
                         std::size_t K2, std::size_t M, std::uint64_t seed, Variant variant,
                         const ExecutionOptions& exec = {});

EstimatorReport auc_cvkm(const StratifiedDataset& data, const Trainer& trainer, std::size_t K1,
                         std::size_t K2, std::size_t M, std::uint64_t seed, Variant variant,
                         const ExecutionOptions& exec = {});

/// Pooled: leave-pair-out bootstrap AUC^(1,1). Partitioned: AUC^(*).
EstimatorReport auc_lpobs(const StratifiedDataset& data, const Trainer& trainer, std::size_t B,
                          std::uint64_t seed, SamplingModel model, Variant variant,
                          const ExecutionOptions& exec = {});

/// Both bootstrap variants computed from the same replicates.
struct BootstrapVariants {
    EstimatorReport pooled;
    EstimatorReport partitioned;
};

BootstrapVariants err_loob_variants(const StratifiedDataset& data, const Trainer& trainer,
                                    double th, std::size_t B, std::uint64_t seed,
                                    SamplingModel model, const ExecutionOptions& exec = {});

BootstrapVariants auc_lpobs_variants(const StratifiedDataset& data, const Trainer& trainer,
                                     std::size_t B, std::uint64_t seed, SamplingModel model,
                                     const ExecutionOptions& exec = {});

/// Dispatches on config.version and config.metric. Throws DomainError for combinations that
/// do not exist (Reduced outside AUC CVK, Reduced with K1 != K2).
EstimatorReport estimate(const StratifiedDataset& data, const Trainer& trainer,
                         const EstimatorConfig& config);

}  // namespace cvlab
