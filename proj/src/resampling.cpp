#include "cvlab/resampling.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cvlab/errors.hpp"

namespace cvlab {

PartitionMap::PartitionMap(std::size_t n, std::size_t folds) {
    if (n == 0 || folds == 0) throw DomainError("partition needs n >= 1 and K >= 1");
    if (n % folds != 0) throw DivisibilityError(n, folds);
    members_.resize(folds);
    std::vector<std::size_t> identity(n);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    build(identity);
}

PartitionMap::PartitionMap(std::size_t n, std::size_t folds, std::span<const std::size_t> perm) {
    if (n == 0 || folds == 0) throw DomainError("partition needs n >= 1 and K >= 1");
    if (n % folds != 0) throw DivisibilityError(n, folds);
    if (perm.size() != n) {
        throw DomainError("permutation has length " + std::to_string(perm.size()) +
                          ", expected " + std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (std::size_t v : perm) {
        if (v >= n || seen[v]) throw DomainError("permutation is not a bijection on [0, n)");
        seen[v] = true;
    }
    members_.resize(folds);
    build(perm);
}

void PartitionMap::build(std::span<const std::size_t> perm) {
    const std::size_t block = perm.size() / members_.size();
    assign_.resize(perm.size());
    for (auto& m : members_) m.reserve(block);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const auto k = static_cast<std::uint32_t>(perm[i] / block);
        assign_[i] = k;
        members_[k].push_back(i);
    }
}

std::vector<std::uint32_t> PartitionMap::training_weights(std::size_t k) const {
    std::vector<std::uint32_t> w(n());
    for (std::size_t i = 0; i < n(); ++i) w[i] = assign_[i] == k ? 0 : 1;
    return w;
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

RepeatedPartition repeated_partitions(std::size_t n, std::size_t folds, std::size_t repetitions,
                                      std::uint64_t seed, std::uint64_t stream) {
    if (repetitions == 0) throw DomainError("repeated partitions need M >= 1");
    if (n == 0 || folds == 0) throw DomainError("partition needs n >= 1 and K >= 1");
    if (n % folds != 0) throw DivisibilityError(n, folds);

    RepeatedPartition out;
    out.seed = seed;
    out.stream = stream;
    out.maps.reserve(repetitions);
    out.perms.reserve(repetitions);
    for (std::size_t m = 0; m < repetitions; ++m) {
        Rng rng(derive_seed(seed, stream, m));
        auto perm = random_permutation(n, rng);
        out.maps.emplace_back(n, folds, perm);
        out.perms.push_back(std::move(perm));
    }
    return out;
}

BootstrapReplicate::BootstrapReplicate(std::vector<std::uint32_t> counts)
    : counts_(std::move(counts)) {
    if (counts_.empty()) throw DomainError("bootstrap replicate over zero observations");
    const std::uint64_t total = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
    if (total != counts_.size()) {
        throw DomainError("bootstrap counts sum to " + std::to_string(total) + ", expected " +
                          std::to_string(counts_.size()));
    }
    unseen_ = static_cast<std::size_t>(std::count(counts_.begin(), counts_.end(), 0u));
}

BootstrapReplicate decode_multiset(std::size_t n, std::span<const std::size_t> subset) {
    if (n == 0) throw DomainError("decode_multiset: n must be positive");
    if (subset.size() != n) throw DomainError("decode_multiset: subset must have n elements");
    std::vector<std::uint32_t> counts(n, 0);
    for (std::size_t t = 0; t < n; ++t) {
        if (subset[t] >= 2 * n - 1 || (t > 0 && subset[t] <= subset[t - 1])) {
            throw DomainError("decode_multiset: subset must be strictly increasing in [0, 2n-1)");
        }
        ++counts[subset[t] - t];
    }
    return BootstrapReplicate(std::move(counts));
}

BootstrapReplicate bootstrap_replicate(std::size_t n, SamplingModel model, std::uint64_t seed) {
    if (n < 2) throw DomainError("bootstrap_replicate needs n >= 2");
    Rng rng(seed);
    if (model == SamplingModel::Ordered) {
        std::vector<std::uint32_t> counts(n, 0);
        for (std::size_t d = 0; d < n; ++d) ++counts[rng.below(n)];
        return BootstrapReplicate(std::move(counts));
    }

    // Uniform n-subset of [0, 2n-1) by partial Fisher-Yates, then stars and bars.
    const std::size_t slots = 2 * n - 1;
    std::vector<std::size_t> pool(slots);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t t = 0; t < n; ++t) {
        const auto j = t + static_cast<std::size_t>(rng.below(slots - t));
        std::swap(pool[t], pool[j]);
    }
    pool.resize(n);
    std::sort(pool.begin(), pool.end());
    return decode_multiset(n, pool);
}

PairIndicatorMatrix pair_oob_indicators(const BootstrapReplicate& rep1,
                                        const BootstrapReplicate& rep2) {
    PairIndicatorMatrix out{rep1.n(), rep2.n(), std::vector<std::uint8_t>(rep1.n() * rep2.n(), 0)};
    for (std::size_t i = 0; i < rep1.n(); ++i) {
        if (!rep1.out_of_bag(i)) continue;
        for (std::size_t j = 0; j < rep2.n(); ++j) out.values[i * out.cols + j] = rep2.out_of_bag(j);
    }
    return out;
}

}  // namespace cvlab
