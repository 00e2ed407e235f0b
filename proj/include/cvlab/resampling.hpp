#pragma once

// Fold-assignment functions and bootstrap replicates.
//
// All indices and fold numbers are 0-based: a PartitionMap over n observations with K folds
// assigns observation i to fold(i) in [0, K), and the contiguous map sends i to i / (n / K).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cvlab/random.hpp"

namespace cvlab {

enum class SamplingModel {
    Ordered,            ///< n i.i.d. uniform index draws (standard bootstrap)
    UnorderedMultiset,  ///< uniform over the C(2n-1, n) multisets of size n
};

class PartitionMap {
public:
    /// Contiguous blocks: fold(i) = i / (n / K). Throws DivisibilityError when K does not divide n.
    PartitionMap(std::size_t n, std::size_t folds);

    /// fold(i) = contiguous_fold(perm[i]). perm must be a bijection on [0, n).
    PartitionMap(std::size_t n, std::size_t folds, std::span<const std::size_t> perm);

    std::size_t n() const noexcept { return assign_.size(); }
    std::size_t folds() const noexcept { return members_.size(); }
    std::size_t fold_size() const noexcept { return n() / folds(); }

    std::uint32_t fold(std::size_t i) const noexcept { return assign_[i]; }
    std::span<const std::uint32_t> assignment() const noexcept { return assign_; }

    /// Preimage of fold k, in increasing observation order.
    std::span<const std::size_t> members(std::size_t k) const noexcept { return members_[k]; }

    /// 0/1 training weights for the complement of fold k.
    std::vector<std::uint32_t> training_weights(std::size_t k) const;

    friend bool operator==(const PartitionMap& a, const PartitionMap& b) {
        return a.assign_ == b.assign_;
    }

private:
    void build(std::span<const std::size_t> perm);

    std::vector<std::uint32_t> assign_;
    std::vector<std::vector<std::size_t>> members_;
};

inline PartitionMap make_partition(std::size_t n, std::size_t folds,
                                   std::optional<std::span<const std::size_t>> perm = std::nullopt) {
    return perm ? PartitionMap(n, folds, *perm) : PartitionMap(n, folds);
}

/// Uniformly random permutation of [0, n) by Fisher-Yates.
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

struct RepeatedPartition {
    std::vector<PartitionMap> maps;
    std::vector<std::vector<std::size_t>> perms;  ///< perms[m] is the shuffle behind maps[m]
    std::uint64_t seed = 0;
    std::uint64_t stream = streams::kPartition;

    std::size_t repetitions() const noexcept { return maps.size(); }
};

/// M shuffled copies of the contiguous K-fold map. Shuffle m is drawn from
/// Rng(derive_seed(seed, stream, m)), so any single repetition can be regenerated alone.
RepeatedPartition repeated_partitions(std::size_t n, std::size_t folds, std::size_t repetitions,
                                      std::uint64_t seed,
                                      std::uint64_t stream = streams::kPartition);

struct StratifiedPartition {
    PartitionMap part1;
    PartitionMap part2;
};

/// One bootstrap draw of size n from n observations, stored as per-index multiplicities.
class BootstrapReplicate {
public:
    /// Throws DomainError unless counts is non-empty and sums to counts.size().
    explicit BootstrapReplicate(std::vector<std::uint32_t> counts);

    std::size_t n() const noexcept { return counts_.size(); }
    std::span<const std::uint32_t> counts() const noexcept { return counts_; }

    /// I_i: observation i was not drawn.
    bool out_of_bag(std::size_t i) const noexcept { return counts_[i] == 0; }

    /// a_b: number of observations not drawn.
    std::size_t unseen() const noexcept { return unseen_; }

    friend bool operator==(const BootstrapReplicate& a, const BootstrapReplicate& b) {
        return a.counts_ == b.counts_;
    }

private:
    std::vector<std::uint32_t> counts_;
    std::size_t unseen_ = 0;
};

/// Throws DomainError when n < 2.
BootstrapReplicate bootstrap_replicate(std::size_t n, SamplingModel model, std::uint64_t seed);

/// Stars-and-bars decoding of an n-subset of [0, 2n-1) into a size-n multiset over [0, n).
/// `subset` must be strictly increasing. Chosen positions are stars; the star at sorted
/// position t belongs to symbol subset[t] - t.
BootstrapReplicate decode_multiset(std::size_t n, std::span<const std::size_t> subset);

/// Row-major 0/1 matrix with entry (i, j) = I_i * I_j for two independently drawn replicates.
struct PairIndicatorMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> values;

    std::uint8_t operator()(std::size_t i, std::size_t j) const noexcept {
        return values[i * cols + j];
    }
};

PairIndicatorMatrix pair_oob_indicators(const BootstrapReplicate& rep1,
                                        const BootstrapReplicate& rep2);

}  // namespace cvlab
