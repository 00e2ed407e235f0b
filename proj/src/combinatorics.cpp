#include "cvlab/combinatorics.hpp"

#include "cvlab/errors.hpp"

namespace cvlab {
namespace {

void require_positive(std::int64_t n, const char* what) {
    if (n < 1) throw DomainError(std::string(what) + " needs n >= 1");
}

}  // namespace

BigInt binom(std::int64_t n, std::int64_t k) {
    if (n < 0) throw DomainError("binom: n must be non-negative");
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    // result stays an exact binomial C(n-k+i, i) after each step.
    for (std::int64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

ExactRational pmf_unseen_count(std::int64_t n, std::int64_t m, std::int64_t k) {
    if (n < 1 || m < 1) throw DomainError("pmf_unseen_count needs n >= 1 and m >= 1");
    if (k < 0 || k > n) return 0;
    const BigInt num = binom(n, k) * binom(m - 1, k + m - n);
    if (num == 0) return 0;
    return ExactRational(num, binom(m + n - 1, m));
}

ExactRational expected_unseen(std::int64_t n) {
    require_positive(n, "expected_unseen");
    return ExactRational(BigInt(n) * (n - 1), BigInt(2 * n - 1));
}

ExactRational expected_unseen_by_pmf(std::int64_t n, const UnseenPmf& pmf) {
    require_positive(n, "expected_unseen_by_pmf");
    ExactRational sum = 0;
    for (std::int64_t k = 0; k <= n; ++k) sum += ExactRational(k) * pmf(n, n, k);
    return sum;
}

ExactRational expected_inv_one_plus_unseen(std::int64_t n) {
    require_positive(n, "expected_inv_one_plus_unseen");
    return ExactRational(2, n + 1);
}

ExactRational expected_inv_one_plus_unseen_by_pmf(std::int64_t n, const UnseenPmf& pmf) {
    require_positive(n, "expected_inv_one_plus_unseen_by_pmf");
    ExactRational sum = 0;
    for (std::int64_t k = 0; k <= n; ++k) sum += pmf(n, n, k) / ExactRational(k + 1);
    return sum;
}

ExactRational inclusion_probability(std::int64_t n) {
    require_positive(n, "inclusion_probability");
    return ExactRational(n, 2 * n - 1);
}

ExactRational inclusion_probability_by_counting(std::int64_t n) {
    require_positive(n, "inclusion_probability_by_counting");
    return 1 - ExactRational(binom(2 * n - 2, n), binom(2 * n - 1, n));
}

ExactRational inclusion_probability_by_pmf(std::int64_t n, const UnseenPmf& pmf) {
    require_positive(n, "inclusion_probability_by_pmf");
    return 1 - expected_unseen_by_pmf(n, pmf) / ExactRational(n);
}

ExactRational expected_oob_weight(std::int64_t n) {
    require_positive(n, "expected_oob_weight");
    return ExactRational(2 * n - 2, 2 * n - 1);
}

ExactRational expected_oob_weight_by_pmf(std::int64_t n, const UnseenPmf& pmf) {
    require_positive(n, "expected_oob_weight_by_pmf");
    if (n == 1) return 0;  // the single observation is always drawn
    const ExactRational left_out = 1 - inclusion_probability_by_counting(n);
    ExactRational inv_mean = 0;
    for (std::int64_t k = 0; k <= n - 1; ++k) {
        inv_mean += pmf(n - 1, n - 1, k) / ExactRational(k + 1);
    }
    return left_out * ExactRational(n) * inv_mean;
}

ExactRational exact_mean_oob_weight(std::int64_t n, const UnseenPmf& pmf) {
    require_positive(n, "exact_mean_oob_weight");
    return 1 - pmf(n, n, 0);
}

bool pmf_normalized(std::int64_t n, std::int64_t m) {
    if (n < 1 || m < 1) throw DomainError("pmf_normalized needs n >= 1 and m >= 1");
    BigInt total = 0;
    for (std::int64_t k = 0; k <= n; ++k) total += binom(n, k) * binom(m - 1, k + m - n);
    return total == binom(m + n - 1, m);
}

std::vector<IdentityCheck> verify_identities(std::int64_t n_max, const UnseenPmf& pmf) {
    if (n_max < 2) throw DomainError("verify_identities needs n_max >= 2");
    std::vector<IdentityCheck> out;
    out.reserve(static_cast<std::size_t>(n_max) * 6);
    for (std::int64_t n = 2; n <= n_max; ++n) {
        ExactRational total = 0;
        for (std::int64_t k = 0; k <= n; ++k) total += pmf(n, n, k);
        out.push_back({"pmf_normalization", n, total == 1});
        out.push_back({"pmf_support", n, pmf(n, n, n) == 0 && pmf(n, n, -1) == 0});
        out.push_back({"expected_unseen", n, expected_unseen(n) == expected_unseen_by_pmf(n, pmf)});
        out.push_back({"expected_inv_one_plus_unseen", n,
                       expected_inv_one_plus_unseen(n) == expected_inv_one_plus_unseen_by_pmf(n, pmf)});
        const ExactRational incl = inclusion_probability(n);
        out.push_back({"inclusion_probability", n,
                       incl == inclusion_probability_by_counting(n) &&
                           incl == inclusion_probability_by_pmf(n, pmf)});
        out.push_back({"expected_oob_weight", n,
                       expected_oob_weight(n) == expected_oob_weight_by_pmf(n, pmf)});
    }
    return out;
}

}  // namespace cvlab
