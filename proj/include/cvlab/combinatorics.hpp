#pragma once

// Exact identities for the number of observations left out of a bootstrap replicate drawn as a
// uniform multiset ("with replacement, without ordering"). Every quantity is available as a
// closed form and as a sum over the pmf, so the two can be compared exactly.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cvlab {

using BigInt = boost::multiprecision::cpp_int;
using ExactRational = boost::multiprecision::cpp_rational;

/// C(n, k); zero when k < 0 or k > n. Throws DomainError when n < 0.
BigInt binom(std::int64_t n, std::int64_t k);

/// Pr[a = k] when m items are drawn as a uniform multiset from n symbols and a counts the
/// symbols never drawn: C(n,k) C(m-1, k+m-n) / C(m+n-1, m). Zero outside the support.
/// Throws DomainError unless n, m >= 1.
ExactRational pmf_unseen_count(std::int64_t n, std::int64_t m, std::int64_t k);

/// Signature of a pmf implementation; lets the verification harness run against a substitute.
using UnseenPmf = std::function<ExactRational(std::int64_t, std::int64_t, std::int64_t)>;

/// E[a_b] for a size-n bootstrap: n(n-1)/(2n-1).
ExactRational expected_unseen(std::int64_t n);
ExactRational expected_unseen_by_pmf(std::int64_t n, const UnseenPmf& pmf = pmf_unseen_count);

/// E[1/(1+a_b)] = 2/(n+1).
ExactRational expected_inv_one_plus_unseen(std::int64_t n);
ExactRational expected_inv_one_plus_unseen_by_pmf(std::int64_t n,
                                                  const UnseenPmf& pmf = pmf_unseen_count);

/// Pr[observation i is drawn] = n/(2n-1).
ExactRational inclusion_probability(std::int64_t n);
/// 1 - Pr[I_i = 1], where leaving i out means drawing n items from the other n-1 symbols:
/// 1 - C(2n-2, n)/C(2n-1, n).
ExactRational inclusion_probability_by_counting(std::int64_t n);
/// 1 - E[a_b]/n, by symmetry of the indicators, with E[a_b] summed over the pmf.
ExactRational inclusion_probability_by_pmf(std::int64_t n, const UnseenPmf& pmf = pmf_unseen_count);

/// Closed form (2n-2)/(2n-1) for the mean of w_b = n I_i / a_b.
///
/// This value is Pr[I_i = 1] * n * E[1/(1 + a')] with a' the unseen count of a size-(n-1)
/// bootstrap over the remaining n-1 observations. The exact mean of n I_i / a_b under the
/// multiset model (0/0 read as 0) is Pr[a_b != 0]; see exact_mean_oob_weight.
ExactRational expected_oob_weight(std::int64_t n);
/// Pr[I_i = 1] * n * sum_k pmf(n-1, n-1, k) / (1 + k).
ExactRational expected_oob_weight_by_pmf(std::int64_t n, const UnseenPmf& pmf = pmf_unseen_count);
/// E[n I_i / a_b] under the multiset model = sum_{k>=1} pmf(n,n,k) (k/n) (n/k) = 1 - pmf(n,n,0).
ExactRational exact_mean_oob_weight(std::int64_t n, const UnseenPmf& pmf = pmf_unseen_count);

/// sum_k C(n,k) C(m-1, k+m-n) == C(m+n-1, m), i.e. the general pmf sums to one.
bool pmf_normalized(std::int64_t n, std::int64_t m);

struct IdentityCheck {
    std::string identity;
    std::int64_t n = 0;
    bool passed = false;
};

/// Runs every exact identity for 2 <= n <= n_max against the given pmf.
std::vector<IdentityCheck> verify_identities(std::int64_t n_max,
                                             const UnseenPmf& pmf = pmf_unseen_count);

}  // namespace cvlab
