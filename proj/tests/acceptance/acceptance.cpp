// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero if any fails.
//
// Usage: acceptance <path-to-cvlab-cli> [criterion numbers...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cvlab/analysis.hpp"
#include "cvlab/combinatorics.hpp"
#include "cvlab/csv_io.hpp"
#include "cvlab/errors.hpp"
#include "cvlab/estimators.hpp"
#include "cvlab/resampling.hpp"
#include "cvlab/simlab.hpp"

using namespace cvlab;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const LdaTrainer kLda(1e-6);
const NearestMeanTrainer kNm;

std::vector<std::size_t> divisors(std::size_t n, std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> out;
    for (std::size_t k = lo; k <= hi; ++k)
        if (n % k == 0) out.push_back(k);
    return out;
}

// ---------------------------------------------------------------------------------------

Outcome c1_variant_equivalence() {
    const auto t0 = Clock::now();
    Rng rng(0xC1);
    double worst = 0.0;
    std::size_t datasets = 0, retries = 0;
    while (datasets < 200) {
        const std::size_t n = 12 + rng.below(49);
        const auto ks = divisors(n, 2, n / 2);
        if (ks.empty()) continue;  // prime n has no proper fold count
        const std::size_t n1 = n / 2 - 2 + rng.below(5);
        const std::size_t n2 = n - n1;
        const std::size_t p = 1 + rng.below(3);
        const auto d = gen_multinormal({p, 0.8, n1, n2}, rng());
        const Trainer& tr = (datasets % 2 == 0) ? static_cast<const Trainer&>(kLda) : kNm;

        const std::size_t K = ks[rng.below(ks.size())];
        const auto k1s = divisors(n1, 2, n1);
        const auto k2s = divisors(n2, 2, n2);
        const std::uint64_t seed = rng();
        const std::size_t M = 1 + rng.below(10);
        try {
            Rng prng(seed);
            const auto perm = random_permutation(n, prng);
            auto gap = [](const EstimatorReport& a, const EstimatorReport& b) { return std::abs(a.value - b.value); };
            worst = std::max(worst, gap(err_cvk(d, tr, 0.0, K, Variant::Pooled, perm),
                                        err_cvk(d, tr, 0.0, K, Variant::Partitioned, perm)));
            worst = std::max(worst, gap(err_cvkr(d, tr, 0.0, K, M, seed, Variant::Pooled),
                                        err_cvkr(d, tr, 0.0, K, M, seed, Variant::Partitioned)));
            if (!k1s.empty() && !k2s.empty()) {
                const std::size_t K1 = k1s[rng.below(k1s.size())];
                const std::size_t K2 = k2s[rng.below(k2s.size())];
                worst = std::max(worst, gap(auc_cvk(d, tr, K1, K2, Variant::Pooled),
                                            auc_cvk(d, tr, K1, K2, Variant::Partitioned)));
                worst = std::max(worst, gap(auc_cvkr(d, tr, K1, K2, M, seed, Variant::Pooled),
                                            auc_cvkr(d, tr, K1, K2, M, seed, Variant::Partitioned)));
            }
        } catch (const EstimationError&) {
            // a fold swallowed a whole class; draw another dataset
            ++retries;
            continue;
        }
        ++datasets;
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-12 && secs < 120.0,
            "max |pooled - partitioned| = " + sci(worst) + " over 200 datasets (" +
                std::to_string(retries) + " redrawn), " + fmt(secs, 1) + " s"};
}

Outcome c2_special_case() {
    Rng rng(0xC2);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n1 = 3 + rng.below(8), n2 = 3 + rng.below(8);
        const auto d = gen_multinormal({1 + rng.below(3), 0.8, n1, n2}, rng());
        const Trainer& tr = rep % 2 ? static_cast<const Trainer&>(kLda) : kNm;
        worst = std::max(worst, std::abs(err_cvk(d, tr, 0.0, n1 + n2, Variant::Pooled).value - err_cvn(d, tr).value));
        worst = std::max(worst, std::abs(auc_cvk(d, tr, n1, n2, Variant::Pooled).value - auc_cvn(d, tr).value));
    }
    return {worst <= 1e-12, "max gap " + sci(worst) + " over 50 datasets"};
}

Outcome c3_witnesses() {
    int cvkm_seed = -1, lpobs_seed = -1;
    double cvkm_gap = 0.0, lpobs_gap = 0.0;
    for (int s = 0; s < 100 && (cvkm_seed < 0 || lpobs_seed < 0); ++s) {
        const auto d = gen_multinormal({2, 0.8, 10, 10}, derive_seed(0xC3, 0, s));
        if (cvkm_seed < 0) {
            const double g = std::abs(err_cvkm(d, kLda, 0.0, 5, 50, s, Variant::Pooled).value -
                                      err_cvkm(d, kLda, 0.0, 5, 50, s, Variant::Partitioned).value);
            if (g > 1e-6) {
                cvkm_seed = s;
                cvkm_gap = g;
            }
        }
        if (lpobs_seed < 0) {
            const auto v = auc_lpobs_variants(d, kLda, 50, s, SamplingModel::Ordered);
            const double g = std::abs(v.pooled.value - v.partitioned.value);
            if (g > 1e-6) {
                lpobs_seed = s;
                lpobs_gap = g;
            }
        }
    }
    return {cvkm_seed >= 0 && lpobs_seed >= 0,
            "CVKM M=50 seed " + std::to_string(cvkm_seed) + " gap " + sci(cvkm_gap) + "; LPOBS B=50 seed " +
                std::to_string(lpobs_seed) + " gap " + sci(lpobs_gap)};
}

Outcome c4_exact_identities() {
    const auto t0 = Clock::now();
    std::size_t failed = 0, total = 0;
    for (const auto& c : verify_identities(200)) {
        ++total;
        failed += !c.passed;
    }
    const double secs = seconds_since(t0);
    return {failed == 0 && secs < 30.0,
            std::to_string(total - failed) + "/" + std::to_string(total) + " identities exact for n=2..200, " +
                fmt(secs, 1) + " s"};
}

Outcome c5_enumeration() {
    bool ok = true;
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<BigInt> tally(n + 1, 0);
        std::vector<std::size_t> c(n);
        std::iota(c.begin(), c.end(), 0);
        const std::size_t N = 2 * n - 1;
        BigInt count = 0;
        while (true) {
            ++tally[decode_multiset(n, c).unseen()];
            ++count;
            std::size_t i = n;
            while (i > 0 && c[i - 1] == N - n + i - 1) --i;
            if (i == 0) break;
            ++c[i - 1];
            for (std::size_t j = i; j < n; ++j) c[j] = c[j - 1] + 1;
        }
        for (std::size_t k = 0; k <= n; ++k) {
            const auto nn = static_cast<std::int64_t>(n);
            ok = ok && ExactRational(tally[k], count) == pmf_unseen_count(nn, nn, static_cast<std::int64_t>(k));
        }
    }
    return {ok, "stars-and-bars enumeration vs pmf for n=1..6"};
}

Outcome c6_ratio_curve() {
    const auto t0 = Clock::now();
    RatioCurveConfig m;
    m.n1_grid = {5};
    m.B = 50000;
    m.model = SamplingModel::UnorderedMultiset;
    m.replicates = 100;
    m.seed = 0xC6;
    m.threads = 0;
    const auto multiset = run_ratio_curve(m);

    RatioCurveConfig o;
    o.n1_grid = {5, 10, 20, 40, 80};
    o.B = 200;
    o.model = SamplingModel::Ordered;
    o.replicates = 100;
    o.seed = 0xC6;
    o.threads = 0;
    const auto ordered = run_ratio_curve(o);
    const double secs = seconds_since(t0);

    const double target = 18.0 / 19.0;
    const double r = multiset[0].ratio_empirical;
    bool ordered_ok = true;
    std::string curve;
    for (const auto& p : ordered) {
        ordered_ok = ordered_ok && std::isfinite(p.ratio_empirical) && p.ratio_empirical > 0.8 &&
                     p.ratio_empirical < 1.05;
        curve += " " + std::to_string(p.n1) + ":" + fmt(p.ratio_empirical);
    }
    return {std::abs(r - target) <= 0.02 && ordered_ok && secs < 300.0,
            "multiset n1=5 ratio " + fmt(r) + " (target " + fmt(target) + " +/- 0.02; Err1 " +
                fmt(multiset[0].mean_pooled) + ", Err* " + fmt(multiset[0].mean_partitioned) +
                "); ordered B=200 curve" + curve + "; " + fmt(secs, 1) + " s"};
}

// Campaign runs shared by criteria 7-10.

struct Campaign {
    std::size_t n_label = 0;
    WeakCorrResult result;
};

WeakCorrResult campaign(std::size_t n1, std::uint64_t seed) {
    WeakCorrConfig c;
    c.spec = {5, 0.8, n1, n1};
    c.trials = 1000;
    c.test_per_class = 1000;
    c.seed = seed;
    c.threads = 0;
    return run_weak_correlation(c);
}

const RoleSummary& role(const WeakCorrResult& r, const char* name) {
    for (const auto& x : r.row.roles)
        if (x.role == name) return x;
    throw std::logic_error("missing role");
}

std::vector<double> campaign_residuals;

struct Interpretation {
    const char* name;
    std::size_t per_class;  // n1 = n2 for the n = 20 row
};

std::string c7_interpretation = "total";
std::vector<Campaign> grid_runs;

Outcome c7_table_row() {
    const auto t0 = Clock::now();
    const Interpretation choices[] = {{"total", 10}, {"per-class", 20}};
    std::string detail;
    int chosen = -1;
    double best = 1e9;
    std::vector<WeakCorrResult> runs;
    for (int i = 0; i < 2; ++i) {
        runs.push_back(campaign(choices[i].per_class, 0xC7));
        campaign_residuals.push_back(std::abs(runs.back().row.shat_decomposition.residual));
        const double ms = role(runs.back(), "S").mean;
        detail += std::string(choices[i].name) + " mean S " + fmt(ms) + "; ";
        if (std::abs(ms - 0.618) <= 0.025 && std::abs(ms - 0.618) < best) {
            best = std::abs(ms - 0.618);
            chosen = i;
        }
    }
    if (chosen < 0) return {false, detail + "no interpretation meets mean S in 0.618 +/- 0.025"};
    c7_interpretation = choices[chosen].name;
    const auto& r = runs[chosen];
    grid_runs.push_back({20, r});
    const auto& S = role(r, "S");
    const auto& Sbar = role(r, "Sbar");
    const auto& Shat = role(r, "Shat");
    const bool rms_close = std::abs(Shat.rms_cond - Shat.rms_mean) <= 0.15 * std::max(Shat.rms_cond, Shat.rms_mean);
    const bool ok = std::abs(S.mean - 0.618) <= 0.025 && std::abs(Sbar.mean - 0.890) <= 0.04 &&
                    std::abs(Shat.mean - 0.591) <= 0.04 && std::abs(Shat.rho - 0.255) <= 0.12 &&
                    Shat.rms_cond >= 0.07 && Shat.rms_cond <= 0.13 && Shat.rms_mean >= 0.07 &&
                    Shat.rms_mean <= 0.13 && rms_close;
    return {ok, detail + "using " + c7_interpretation + ": S " + fmt(S.mean) + " Sbar " + fmt(Sbar.mean) +
                    " Shat " + fmt(Shat.mean) + " rho " + fmt(Shat.rho) + " rms_cond " + fmt(Shat.rms_cond) +
                    " rms_mean " + fmt(Shat.rms_mean) + " sigma_S " + fmt(S.sigma) + "; " +
                    fmt(seconds_since(t0), 1) + " s"};
}

Outcome c8_asymptotic() {
    const auto r = campaign(100, 0xC8);
    campaign_residuals.push_back(std::abs(r.row.shat_decomposition.residual));
    const double ms = role(r, "S").mean;
    return {std::abs(ms - 0.714) <= 0.01,
            "n1=n2=100 mean S " + fmt(ms) + " (target 0.714 +/- 0.01; Bayes AUC " + fmt(bayes_auc(0.8)) + ")"};
}

Outcome c10_weak_correlation() {
    const bool total = c7_interpretation == "total";
    std::string detail = "interpretation " + c7_interpretation + ":";
    bool ok = true;
    for (std::size_t n : {20u, 40u, 100u}) {
        const Campaign* found = nullptr;
        for (const auto& g : grid_runs)
            if (g.n_label == n) found = &g;
        if (!found) {
            grid_runs.push_back({n, campaign(total ? n / 2 : n, 0xCA + n)});
            campaign_residuals.push_back(std::abs(grid_runs.back().result.row.shat_decomposition.residual));
            found = &grid_runs.back();
        }
        const auto& sh = role(found->result, "Shat");
        const double rel = std::abs(sh.rms_cond - sh.rms_mean) / sh.rms_mean;
        const bool row_ok = sh.rho < 0.45 && rel < 0.15;
        ok = ok && row_ok;
        detail += " n=" + std::to_string(n) + " rho " + fmt(sh.rho) + " rel " + fmt(rel) + (row_ok ? "" : " (x)");
    }
    return {ok, detail};
}

Outcome c9_identity() {
    Rng rng(0xC9);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t T = 2 + rng.below(500);
        std::vector<double> s(T), e(T);
        const double a = rng.uniform(), b = rng.uniform();
        for (std::size_t t = 0; t < T; ++t) {
            s[t] = rng.uniform();
            e[t] = a * s[t] + b * rng.normal();
        }
        worst = std::max(worst, identity_residual(PairedPerformanceSample(s, e)));
    }
    double worst_campaign = 0.0;
    for (double r : campaign_residuals) worst_campaign = std::max(worst_campaign, r);
    return {worst <= 1e-12 && worst_campaign <= 1e-12,
            "random pairs max " + sci(worst) + "; " + std::to_string(campaign_residuals.size()) +
                " campaign outputs max " + sci(worst_campaign)};
}

// Runs the command-line tool twice with the same configuration and compares outputs bytewise.
Outcome c11_determinism(const std::string& cli) {
    const fs::path dir = fs::temp_directory_path() / ("cvlab_determinism_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const auto d = gen_multinormal({2, 0.8, 8, 8}, 0xCB);
    write_file_atomic(dir / "data.csv", dataset_to_csv(d));
    {
        std::string paired = "s,s_hat\n";
        Rng r(0xCB);
        for (int t = 0; t < 50; ++t) paired += format_double(r.uniform()) + "," + format_double(r.uniform()) + "\n";
        write_file_atomic(dir / "paired.csv", paired);
    }
    struct Job {
        std::string sub, config;
        std::vector<std::string> outputs;
    };
    const std::vector<Job> jobs = {
        {"estimate",
         "[input]\ndataset = data.csv\n[estimator]\nversion = LOOB\nvariant = Partitioned\nmetric = AUC\nB = 30\n"
         "[run]\nseed = 7\n[output]\njson = est.json\ncsv = est.csv\n",
         {"est.json", "est.csv"}},
        {"simulate",
         "[run]\nseed = 11\nthreads = 2\n[simulation]\np = 3\ndelta = 0.8\nn1 = 6\nn2 = 6\ntrials = 10\n"
         "test_per_class = 200\n[estimator]\nversion = LOOB\nvariant = Partitioned\nmetric = AUC\nB = 20\n"
         "[output]\ntable = table.csv\ntriples = triples.csv\nmanifest = manifest.json\n",
         {"table.csv", "triples.csv", "manifest.json"}},
        {"ratio-curve",
         "[run]\nseed = 5\n[ratio]\nn1_grid = 5, 8\nB = 40\nreplicates = 5\nmodel = UnorderedMultiset\n"
         "[output]\nratio = ratio.csv\n",
         {"ratio.csv"}},
        {"decompose", "[input]\npaired = paired.csv\n[output]\njson = dec.json\ncsv = dec.csv\n",
         {"dec.json", "dec.csv"}},
    };
    bool ok = true;
    std::string detail;
    for (const auto& job : jobs) {
        const fs::path cfg = dir / (job.sub + ".ini");
        write_file_atomic(cfg, job.config);
        std::vector<std::string> first;
        for (int run = 0; run < 2; ++run) {
            const std::string cmd = "\"" + cli + "\" " + job.sub + " \"" + cfg.string() + "\" > /dev/null";
            const int rc = std::system(cmd.c_str());
            if (rc != 0) {
                ok = false;
                detail += job.sub + " exit " + std::to_string(rc) + "; ";
                break;
            }
            for (std::size_t k = 0; k < job.outputs.size(); ++k) {
                const std::string bytes = read_file(dir / job.outputs[k]);
                if (run == 0) {
                    first.push_back(bytes);
                } else if (bytes != first[k]) {
                    ok = false;
                    detail += job.outputs[k] + " differs; ";
                }
            }
        }
    }
    fs::remove_all(dir);
    return {ok, detail.empty() ? "estimate, simulate, ratio-curve, decompose outputs byte-identical across reruns"
                               : detail};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <cvlab-cli> [criteria...]\n", argv[0]);
        return 2;
    }
    const std::string cli = argv[1];
    std::set<int> only;
    for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

    // 9 runs after the campaigns so it can check their residuals.
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, c1_variant_equivalence},
        {2, c2_special_case},
        {3, c3_witnesses},
        {4, c4_exact_identities},
        {5, c5_enumeration},
        {6, c6_ratio_curve},
        {7, c7_table_row},
        {8, c8_asymptotic},
        {10, c10_weak_correlation},
        {9, c9_identity},
        {11, [&] { return c11_determinism(cli); }},
    };
    int failures = 0;
    for (const auto& [id, fn] : criteria) {
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
