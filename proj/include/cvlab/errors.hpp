#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cvlab {

/// Invalid input to a pure operation (non-finite value, bad shape, bad permutation).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A fold count that does not divide the number of observations.
class DivisibilityError : public DomainError {
public:
    DivisibilityError(std::size_t n, std::size_t k)
        : DomainError("K=" + std::to_string(k) + " does not divide n=" + std::to_string(n)),
          n_(n), k_(k) {}

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }

private:
    std::size_t n_;
    std::size_t k_;
};

/// A trainer could not fit the data it was given (empty class, singular covariance).
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An estimator could not produce a value. Carries the resample index (fold, run or replicate)
/// at which the failure happened, or npos when not tied to one.
class EstimationError : public std::runtime_error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit EstimationError(const std::string& what, std::size_t index = npos)
        : std::runtime_error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace cvlab
