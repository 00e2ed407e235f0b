#pragma once

// Normalized MSE decomposition of an estimator against the true conditional performance, and
// a simple convergence summary for estimates indexed by resampling budget.

#include <cstddef>
#include <map>
#include <vector>

namespace cvlab {

/// Paired per-trial true performance s and estimate s_hat.
/// Throws DomainError unless both have the same length T >= 2 and all entries are finite.
class PairedPerformanceSample {
public:
    PairedPerformanceSample(std::vector<double> s, std::vector<double> s_hat);

    std::size_t size() const noexcept { return s_.size(); }
    const std::vector<double>& s() const noexcept { return s_; }
    const std::vector<double>& s_hat() const noexcept { return s_hat_; }

private:
    std::vector<double> s_;
    std::vector<double> s_hat_;
};

/// All moments are plug-in (divide by T), so
///   mse_cond / (sigma_s sigma_s_hat) = mse_mean / (sigma_s sigma_s_hat) + sigma_s / sigma_s_hat - 2 rho
/// holds as a sample identity.
struct DecompositionReport {
    std::size_t T = 0;
    double mean_s = 0.0;
    double mean_s_hat = 0.0;
    double sigma_s = 0.0;
    double sigma_s_hat = 0.0;
    double mse_cond = 0.0;  ///< (1/T) sum (s_hat - s)^2
    double mse_mean = 0.0;  ///< (1/T) sum (s_hat - mean_s)^2
    double rms_cond = 0.0;
    double rms_mean = 0.0;
    // The fields below are zero when degenerate is set.
    double rho = 0.0;
    double sigma_ratio = 0.0;  ///< sigma_s / sigma_s_hat
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  ///< lhs - rhs
    bool degenerate = false;  ///< sigma_s or sigma_s_hat is zero; nothing was divided
};

DecompositionReport decompose(const PairedPerformanceSample& sample);

/// |lhs - rhs| of the decomposition. Throws DomainError for degenerate samples.
double identity_residual(const PairedPerformanceSample& sample);

struct ConvergenceSummary {
    std::vector<std::size_t> budgets;
    std::vector<double> gaps;  ///< |v[k+1] - v[k]|, one per consecutive pair of budgets
    double max_tail_gap = 0.0;  ///< largest gap among the upper half of the budgets
    bool converged = false;     ///< max_tail_gap <= tolerance
};

/// Budgets are the map keys (already increasing). The upper half is the last ceil(count/2)
/// budgets, and its gaps are those between consecutive budgets inside it.
/// Throws DomainError when fewer than 3 budgets are given.
ConvergenceSummary convergence_diagnostic(const std::map<std::size_t, double>& values,
                                          double tolerance);

}  // namespace cvlab
