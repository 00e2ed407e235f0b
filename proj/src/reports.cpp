#include "cvlab/reports.hpp"

#include <json.hpp>

#include "cvlab/csv_io.hpp"

namespace cvlab {

namespace {

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k) out += ',';
        out += fields[k];
    }
    out += '\n';
    return out;
}

std::string str(std::size_t v) { return std::to_string(v); }
std::string str(double v) { return format_double(v); }
std::string str(std::string_view v) { return std::string(v); }

}  // namespace

std::string report_json(const EstimatorReport& r) {
    const EstimatorConfig& c = r.config;
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["value"] = r.value;
    j["version"] = to_string(c.version);
    j["variant"] = to_string(c.variant);
    j["metric"] = to_string(c.metric);
    j["K"] = c.K;
    j["K1"] = c.K1;
    j["K2"] = c.K2;
    j["M"] = c.M;
    j["B"] = c.B;
    j["seed"] = c.seed;
    j["model"] = to_string(c.model);
    j["th"] = c.th;
    j["strict"] = c.exec.strict;
    j["trainer"] = r.trainer;
    j["excluded_count"] = r.excluded_count;
    j["skipped_resamples"] = r.skipped_resamples;
    j["redrawn_resamples"] = r.redrawn_resamples;
    return j.dump(2) + "\n";
}

std::string report_csv(const EstimatorReport& r) {
    const EstimatorConfig& c = r.config;
    return join({"version", "variant", "metric", "value", "K", "K1", "K2", "M", "B", "seed", "model",
                 "th", "trainer", "excluded_count", "skipped_resamples", "redrawn_resamples"}) +
           join({str(to_string(c.version)), str(to_string(c.variant)), str(to_string(c.metric)),
                 str(r.value), str(c.K), str(c.K1), str(c.K2), str(c.M), str(c.B),
                 std::to_string(c.seed), str(to_string(c.model)), str(c.th), r.trainer,
                 str(r.excluded_count), str(r.skipped_resamples), str(r.redrawn_resamples)});
}

std::string decomposition_json(const DecompositionReport& d) {
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["T"] = d.T;
    j["mean_s"] = d.mean_s;
    j["mean_s_hat"] = d.mean_s_hat;
    j["sigma_s"] = d.sigma_s;
    j["sigma_s_hat"] = d.sigma_s_hat;
    j["mse_cond"] = d.mse_cond;
    j["mse_mean"] = d.mse_mean;
    j["rms_cond"] = d.rms_cond;
    j["rms_mean"] = d.rms_mean;
    j["degenerate"] = d.degenerate;
    if (!d.degenerate) {
        j["rho"] = d.rho;
        j["sigma_ratio"] = d.sigma_ratio;
        j["lhs"] = d.lhs;
        j["rhs"] = d.rhs;
        j["residual"] = d.residual;
    }
    return j.dump(2) + "\n";
}

std::string decomposition_csv(const DecompositionReport& d) {
    auto opt = [&](double v) { return d.degenerate ? std::string{} : str(v); };
    return join({"T", "mean_s", "mean_s_hat", "sigma_s", "sigma_s_hat", "rms_cond", "rms_mean",
                 "mse_cond", "mse_mean", "rho", "sigma_ratio", "lhs", "rhs", "residual",
                 "degenerate"}) +
           join({str(d.T), str(d.mean_s), str(d.mean_s_hat), str(d.sigma_s), str(d.sigma_s_hat),
                 str(d.rms_cond), str(d.rms_mean), str(d.mse_cond), str(d.mse_mean), opt(d.rho),
                 opt(d.sigma_ratio), opt(d.lhs), opt(d.rhs), opt(d.residual),
                 d.degenerate ? "1" : "0"});
}

std::string experiment_table_csv(const ExperimentRow& row) {
    std::string out = join({"role", "mean", "sigma", "rms_cond", "rms_mean", "rho", "n"});
    for (const auto& r : row.roles) {
        out += join({r.role, str(r.mean), str(r.sigma), str(r.rms_cond), str(r.rms_mean), str(r.rho),
                     str(row.n1 + row.n2)});
    }
    return out;
}

std::string triples_csv(const std::vector<TrialTriple>& triples) {
    std::string out = join({"trial", "S", "Sbar", "Shat"});
    for (const auto& t : triples) out += join({str(t.trial), str(t.s), str(t.s_bar), str(t.s_hat)});
    return out;
}

std::string ratio_csv(const std::vector<RatioPoint>& points) {
    std::string out = join({"n1", "ratio_empirical", "ratio_theory", "model"});
    for (const auto& p : points) {
        out += join({str(p.n1), str(p.ratio_empirical), str(p.ratio_theory), str(to_string(p.model))});
    }
    return out;
}

}  // namespace cvlab
