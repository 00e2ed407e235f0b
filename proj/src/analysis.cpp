#include "cvlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvlab/errors.hpp"

namespace cvlab {

PairedPerformanceSample::PairedPerformanceSample(std::vector<double> s, std::vector<double> s_hat)
    : s_(std::move(s)), s_hat_(std::move(s_hat)) {
    if (s_.size() != s_hat_.size()) {
        throw DomainError("paired sample lengths differ: " + std::to_string(s_.size()) + " vs " +
                          std::to_string(s_hat_.size()));
    }
    if (s_.size() < 2) throw DomainError("paired sample needs T >= 2");
    for (std::size_t t = 0; t < s_.size(); ++t) {
        if (!std::isfinite(s_[t]) || !std::isfinite(s_hat_[t])) {
            throw DomainError("paired sample has a non-finite entry at trial " + std::to_string(t));
        }
    }
}

DecompositionReport decompose(const PairedPerformanceSample& sample) {
    const auto& s = sample.s();
    const auto& e = sample.s_hat();
    const std::size_t T = sample.size();
    const double inv_t = 1.0 / static_cast<double>(T);

    DecompositionReport r;
    r.T = T;
    for (std::size_t t = 0; t < T; ++t) {
        r.mean_s += s[t];
        r.mean_s_hat += e[t];
    }
    r.mean_s *= inv_t;
    r.mean_s_hat *= inv_t;

    double var_s = 0.0, var_e = 0.0, cov = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const double ds = s[t] - r.mean_s;
        const double de = e[t] - r.mean_s_hat;
        var_s += ds * ds;
        var_e += de * de;
        cov += ds * de;
        r.mse_cond += (e[t] - s[t]) * (e[t] - s[t]);
        r.mse_mean += (e[t] - r.mean_s) * (e[t] - r.mean_s);
    }
    var_s *= inv_t;
    var_e *= inv_t;
    cov *= inv_t;
    r.mse_cond *= inv_t;
    r.mse_mean *= inv_t;
    r.sigma_s = std::sqrt(var_s);
    r.sigma_s_hat = std::sqrt(var_e);
    r.rms_cond = std::sqrt(r.mse_cond);
    r.rms_mean = std::sqrt(r.mse_mean);

    if (r.sigma_s == 0.0 || r.sigma_s_hat == 0.0) {
        r.degenerate = true;
        return r;
    }
    const double norm = r.sigma_s * r.sigma_s_hat;
    r.rho = std::clamp(cov / norm, -1.0, 1.0);
    r.sigma_ratio = r.sigma_s / r.sigma_s_hat;
    r.lhs = r.mse_cond / norm;
    r.rhs = r.mse_mean / norm + r.sigma_ratio - 2.0 * r.rho;
    r.residual = r.lhs - r.rhs;
    return r;
}

double identity_residual(const PairedPerformanceSample& sample) {
    const DecompositionReport r = decompose(sample);
    if (r.degenerate) throw DomainError("degenerate sample: a standard deviation is zero");
    return std::abs(r.residual);
}

ConvergenceSummary convergence_diagnostic(const std::map<std::size_t, double>& values,
                                          double tolerance) {
    if (values.size() < 3) throw DomainError("convergence_diagnostic needs at least 3 budgets");
    ConvergenceSummary out;
    std::vector<double> v;
    for (const auto& [budget, value] : values) {
        if (!std::isfinite(value)) {
            throw DomainError("non-finite estimate at budget " + std::to_string(budget));
        }
        out.budgets.push_back(budget);
        v.push_back(value);
    }
    for (std::size_t k = 0; k + 1 < v.size(); ++k) out.gaps.push_back(std::abs(v[k + 1] - v[k]));

    const std::size_t top = (v.size() + 1) / 2;
    const std::size_t first = v.size() - top;
    for (std::size_t k = first; k + 1 < v.size(); ++k) {
        out.max_tail_gap = std::max(out.max_tail_gap, out.gaps[k]);
    }
    out.converged = out.max_tail_gap <= tolerance;
    return out;
}

}  // namespace cvlab
