#include "cvlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvlab/errors.hpp"

namespace cvlab {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) {
        throw DomainError("feature matrix expects " + std::to_string(rows_ * cols_) +
                          " values, got " + std::to_string(values_.size()));
    }
}

StratifiedDataset::StratifiedDataset(FeatureMatrix class1, FeatureMatrix class2)
    : class1_(std::move(class1)), class2_(std::move(class2)) {
    if (class1_.rows() == 0 || class2_.rows() == 0) {
        throw DomainError("dataset needs at least one observation per class");
    }
    if (class1_.cols() == 0) throw DomainError("dataset dimension must be positive");
    if (class1_.cols() != class2_.cols()) {
        throw DomainError("class matrices have different column counts (" +
                          std::to_string(class1_.cols()) + " vs " + std::to_string(class2_.cols()) +
                          ")");
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(class1_.values().begin(), class1_.values().end(), finite) ||
        !std::all_of(class2_.values().begin(), class2_.values().end(), finite)) {
        throw DomainError("dataset contains non-finite feature values");
    }
}

ScoringRule::ScoringRule(std::size_t dim, ScoreFn fn)
    : dim_(dim), fn_(std::make_shared<const ScoreFn>(std::move(fn))) {}

double ScoringRule::score(std::span<const double> x) const {
    if (x.size() != dim_) {
        throw DomainError("scoring rule of dimension " + std::to_string(dim_) +
                          " applied to a point of dimension " + std::to_string(x.size()));
    }
    return (*fn_)(x);
}

ScoringRule Trainer::train(const StratifiedDataset& data) const {
    const std::vector<std::uint32_t> w1(data.n1(), 1);
    const std::vector<std::uint32_t> w2(data.n2(), 1);
    return train(data, w1, w2);
}

double mw_kernel(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("mw_kernel: non-finite score");
    if (a > b) return 0.0;
    if (a < b) return 1.0;
    return 0.5;
}

double empirical_auc(std::span<const double> scores1, std::span<const double> scores2) {
    if (scores1.empty() || scores2.empty()) throw DomainError("empirical_auc: empty score vector");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(scores1.begin(), scores1.end(), finite) ||
        !std::all_of(scores2.begin(), scores2.end(), finite)) {
        throw DomainError("empirical_auc: non-finite score");
    }

    // Count (a < b) and (a == b) pairs by merging sorted copies; the sum of psi is
    // less + ties / 2, accumulated in integers so the result is exact.
    std::vector<double> a(scores1.begin(), scores1.end());
    std::vector<double> b(scores2.begin(), scores2.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    std::uint64_t twice_sum = 0;
    std::size_t lo = 0;  // first index in a with a[lo] >= b[j]
    std::size_t hi = 0;  // first index in a with a[hi] > b[j]
    for (double bj : b) {
        while (lo < a.size() && a[lo] < bj) ++lo;
        if (hi < lo) hi = lo;
        while (hi < a.size() && a[hi] <= bj) ++hi;
        twice_sum += 2 * lo + (hi - lo);
    }
    const double pairs = static_cast<double>(a.size()) * static_cast<double>(b.size());
    return static_cast<double>(twice_sum) / (2.0 * pairs);
}

ClassLabel classify(double score, double th) noexcept {
    return score < th ? ClassLabel::One : ClassLabel::Two;
}

double zero_one_loss(const ScoringRule& rule, const LabeledPoint& point, double th) {
    return classify(rule.score(point.features), th) == point.label ? 0.0 : 1.0;
}

}  // namespace cvlab
