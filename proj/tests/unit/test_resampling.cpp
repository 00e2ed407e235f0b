#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "cvlab/errors.hpp"
#include "cvlab/resampling.hpp"

using namespace cvlab;

namespace {

std::vector<std::uint32_t> assign(const PartitionMap& m) {
    return {m.assignment().begin(), m.assignment().end()};
}

// All n-subsets of [0, 2n-1) in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> c(n);
    std::iota(c.begin(), c.end(), 0);
    const std::size_t N = 2 * n - 1;
    while (true) {
        out.push_back(c);
        std::size_t i = n;
        while (i > 0 && c[i - 1] == N - n + i - 1) --i;
        if (i == 0) break;
        ++c[i - 1];
        for (std::size_t j = i; j < n; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

}  // namespace

TEST_CASE("contiguous partitions") {
    CHECK(assign(PartitionMap(6, 3)) == std::vector<std::uint32_t>{0, 0, 1, 1, 2, 2});
    CHECK(assign(PartitionMap(4, 4)) == std::vector<std::uint32_t>{0, 1, 2, 3});
    CHECK_THROWS_AS(PartitionMap(7, 3), DivisibilityError);
    CHECK_THROWS_AS(PartitionMap(4, 0), DomainError);
}

TEST_CASE("permuted partition") {
    // 1-based perm [3,1,4,2] written 0-based.
    const std::vector<std::size_t> perm{2, 0, 3, 1};
    const PartitionMap m(4, 2, perm);
    CHECK(assign(m) == std::vector<std::uint32_t>{1, 0, 1, 0});
    CHECK(std::vector<std::size_t>(m.members(0).begin(), m.members(0).end()) ==
          std::vector<std::size_t>{1, 3});
    CHECK(m.training_weights(0) == std::vector<std::uint32_t>{1, 0, 1, 0});
    const std::vector<std::size_t> bad{0, 0, 1, 2};
    CHECK_THROWS_AS(PartitionMap(4, 2, bad), DomainError);
}

TEST_CASE("repeated partitions are deterministic and balanced") {
    const auto a = repeated_partitions(6, 3, 50, 123);
    const auto b = repeated_partitions(6, 3, 50, 123);
    REQUIRE(a.repetitions() == 50);
    for (std::size_t m = 0; m < 50; ++m) {
        CHECK(a.maps[m] == b.maps[m]);
        for (std::size_t k = 0; k < 3; ++k) CHECK(a.maps[m].members(k).size() == 2);
    }
    const auto c = repeated_partitions(6, 6, 3, 5);
    for (const auto& m : c.maps)
        for (std::size_t k = 0; k < 6; ++k) CHECK(m.members(k).size() == 1);
    // a single repetition can be regenerated alone
    Rng rng(derive_seed(123, streams::kPartition, 7));
    CHECK(random_permutation(6, rng) == a.perms[7]);
}

TEST_CASE("multiset decoding is a bijection for n = 3") {
    std::map<std::vector<std::uint32_t>, int> seen;
    for (const auto& s : subsets(3)) {
        const auto rep = decode_multiset(3, s);
        std::uint32_t total = 0;
        for (auto c : rep.counts()) total += c;
        CHECK(total == 3);
        ++seen[{rep.counts().begin(), rep.counts().end()}];
    }
    CHECK(seen.size() == 10);
    for (const auto& [k, v] : seen) CHECK(v == 1);
}

TEST_CASE("bootstrap replicate validation") {
    CHECK_THROWS_AS(BootstrapReplicate({1, 2}), DomainError);
    CHECK_THROWS_AS(BootstrapReplicate({}), DomainError);
    CHECK_THROWS_AS(bootstrap_replicate(1, SamplingModel::Ordered, 1), DomainError);
    const BootstrapReplicate r({2, 0, 1});
    CHECK(r.unseen() == 1);
    CHECK(r.out_of_bag(1));
    CHECK_FALSE(r.out_of_bag(0));
    CHECK(bootstrap_replicate(9, SamplingModel::UnorderedMultiset, 4) ==
          bootstrap_replicate(9, SamplingModel::UnorderedMultiset, 4));
}

TEST_CASE("sampler frequencies") {
    const int N = 200000;
    int mult_one = 0, ord_zero = 0;
    for (int b = 0; b < N; ++b) {
        mult_one += bootstrap_replicate(3, SamplingModel::UnorderedMultiset, derive_seed(1, 0, b)).unseen() == 1;
        ord_zero += bootstrap_replicate(3, SamplingModel::Ordered, derive_seed(2, 0, b)).unseen() == 0;
    }
    // 5 standard errors
    CHECK(std::abs(mult_one / double(N) - 0.6) < 5 * std::sqrt(0.6 * 0.4 / N));
    const double p0 = 6.0 / 27.0;
    CHECK(std::abs(ord_zero / double(N) - p0) < 5 * std::sqrt(p0 * (1 - p0) / N));
}

TEST_CASE("multiset sampler is uniform over the 10 multisets for n = 3") {
    std::map<std::vector<std::uint32_t>, int> freq;
    const int N = 100000;
    for (int b = 0; b < N; ++b) {
        const auto r = bootstrap_replicate(3, SamplingModel::UnorderedMultiset, derive_seed(3, 0, b));
        ++freq[{r.counts().begin(), r.counts().end()}];
    }
    CHECK(freq.size() == 10);
    double chi2 = 0.0;
    for (const auto& [k, v] : freq) chi2 += (v - N / 10.0) * (v - N / 10.0) / (N / 10.0);
    CHECK(chi2 < 27.88);  // chi-square(9) upper 0.001 point
}

TEST_CASE("pair indicator matrix") {
    const BootstrapReplicate a({0, 2}), b({2, 0});
    const auto m = pair_oob_indicators(a, b);
    CHECK(m.rows == 2);
    CHECK(m.cols == 2);
    CHECK(m(0, 0) == 0);
    CHECK(m(0, 1) == 1);
    CHECK(m(1, 0) == 0);
    CHECK(m(1, 1) == 0);
    const BootstrapReplicate full({1, 1}), one({1});
    for (auto v : pair_oob_indicators(full, full).values) CHECK(v == 0);
    CHECK(pair_oob_indicators(one, one).values.size() == 1);
}
