#pragma once

// Domain primitives: two-class datasets, trained scoring rules, the zero-one loss and the
// Mann-Whitney kernel.
//
// Orientation convention used everywhere in the library: a higher score means "class 2". A
// point is classified as class 1 when score < th and as class 2 when score >= th.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cvlab {

enum class ClassLabel : int { One = 1, Two = 2 };

/// Dense row-major matrix of features; rows are observations.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols);
    FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * cols_, cols_}; }

    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

struct LabeledPoint {
    std::span<const double> features;
    ClassLabel label;
};

/// Two-class sample: n1 rows of class 1 and n2 rows of class 2, both of dimension p.
///
/// Error-rate estimators view the data as one pooled set of n = n1 + n2 points, indexed with
/// class 1 first: pooled index i < n1 is class1 row i, otherwise class2 row i - n1.
class StratifiedDataset {
public:
    /// Throws DomainError unless n1, n2 >= 1, p >= 1, column counts agree and all values are finite.
    StratifiedDataset(FeatureMatrix class1, FeatureMatrix class2);

    std::size_t n1() const noexcept { return class1_.rows(); }
    std::size_t n2() const noexcept { return class2_.rows(); }
    std::size_t n() const noexcept { return n1() + n2(); }
    std::size_t dim() const noexcept { return class1_.cols(); }

    const FeatureMatrix& class1() const noexcept { return class1_; }
    const FeatureMatrix& class2() const noexcept { return class2_; }

    LabeledPoint pooled_point(std::size_t i) const noexcept {
        return i < n1() ? LabeledPoint{class1_.row(i), ClassLabel::One}
                        : LabeledPoint{class2_.row(i - n1()), ClassLabel::Two};
    }

    friend bool operator==(const StratifiedDataset&, const StratifiedDataset&) = default;

private:
    FeatureMatrix class1_;
    FeatureMatrix class2_;
};

/// A trained classifier h_X(.). Immutable and cheap to copy; safe to share across threads.
class ScoringRule {
public:
    using ScoreFn = std::function<double(std::span<const double>)>;

    ScoringRule(std::size_t dim, ScoreFn fn);

    std::size_t dim() const noexcept { return dim_; }

    /// Throws DomainError if x.size() != dim().
    double score(std::span<const double> x) const;

private:
    std::size_t dim_;
    std::shared_ptr<const ScoreFn> fn_;
};

/// A training procedure. Training sets are selected from a dataset by per-observation
/// multiplicities: 0/1 for cross-validation folds, bootstrap counts for replicates.
///
/// Implementations must be deterministic functions of (data, weights) and must throw
/// TrainingError when a class has zero total weight or the fit is numerically impossible.
class Trainer {
public:
    virtual ~Trainer() = default;

    virtual std::string id() const = 0;

    virtual ScoringRule train(const StratifiedDataset& data, std::span<const std::uint32_t> weights1,
                              std::span<const std::uint32_t> weights2) const = 0;

    /// Train on the full dataset (every weight 1).
    ScoringRule train(const StratifiedDataset& data) const;
};

/// psi(a, b): 0 if a > b, 0.5 if a == b, 1 if a < b. Throws DomainError on non-finite input.
double mw_kernel(double a, double b);

/// Mann-Whitney AUC: mean of psi(scores1[i], scores2[j]) over all n1*n2 pairs.
/// Throws DomainError on empty or non-finite input.
double empirical_auc(std::span<const double> scores1, std::span<const double> scores2);

ClassLabel classify(double score, double th) noexcept;

/// Q: 1 when the rule misclassifies the point at threshold th, else 0.
double zero_one_loss(const ScoringRule& rule, const LabeledPoint& point, double th);

}  // namespace cvlab
