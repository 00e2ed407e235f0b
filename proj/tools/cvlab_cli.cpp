// cvlab command line: cvlab <estimate|verify|simulate|ratio-curve|decompose> <config>

#include <CLI11.hpp>
#include <json.hpp>

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "cvlab/cvlab.h"
#include "run_config.hpp"

namespace fs = std::filesystem;
using cli::ConfigError;
using cli::RunConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitEstimation = 3;

/// A library call failed; carries the exit code its status maps to.
struct ApiFailure {
    int exit_code;
    std::string message;
};

void check(cvlab_status s) {
    if (s == CVLAB_OK) return;
    const int code = (s == CVLAB_E_TRAINING || s == CVLAB_E_ESTIMATION || s == CVLAB_E_INTERNAL)
                         ? kExitEstimation
                         : kExitInput;
    throw ApiFailure{code, cvlab_last_error()};
}

struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { cvlab_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
    check(cvlab_write_file(path.c_str(), content.data(), content.size()));
}

/// SHA-1 of "blob <len>\0<content>", the object id git would give the file.
std::string git_blob_sha1(const std::string& content) {
    const std::string data = "blob " + std::to_string(content.size()) + '\0' + content;
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr) != 1) {
        throw ApiFailure{kExitEstimation, "SHA-1 digest failed"};
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

struct Context {
    RunConfig cfg;
    fs::path base;  // relative paths resolve against the config file's directory

    fs::path path(const std::string& section, const std::string& key) const {
        const fs::path p = cfg.str(section, key);
        return p.is_absolute() ? p : base / p;
    }
};

unsigned threads_of(const RunConfig& c) {
    const auto t = c.u64_or("run", "threads", 1);
    if (t > 1024) throw ConfigError("[run] threads: at most 1024");
    return static_cast<unsigned>(t);
}

template <class E>
E parse_choice(const RunConfig& c, const std::string& section, const std::string& key,
               std::initializer_list<std::pair<const char*, E>> choices, E fallback) {
    if (!c.has(section, key)) return fallback;
    std::string v = c.str(section, key);
    std::string lower = v;
    for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    std::string names;
    for (const auto& [name, value] : choices) {
        if (lower == name) return value;
        names += names.empty() ? name : std::string(", ") + name;
    }
    throw ConfigError("[" + section + "] " + key + ": unknown value '" + v + "' (expected " + names + ")");
}

cvlab_trainer_kind trainer_kind(const RunConfig& c) {
    return parse_choice<cvlab_trainer_kind>(
        c, "trainer", "kind", {{"lda", CVLAB_TRAINER_LDA}, {"nearest_mean", CVLAB_TRAINER_NEAREST_MEAN}},
        CVLAB_TRAINER_LDA);
}

cvlab_sampling_model sampling_model(const RunConfig& c, const std::string& section) {
    return parse_choice<cvlab_sampling_model>(
        c, section, "model", {{"ordered", CVLAB_ORDERED}, {"unorderedmultiset", CVLAB_UNORDERED_MULTISET}},
        CVLAB_ORDERED);
}

bool randomized(cvlab_version_kind v) { return v == CVLAB_CVKR || v == CVLAB_CVKM || v == CVLAB_LOOB; }

/// Reads the [estimator] section. K, K1, K2, M and B are required only where the version uses them.
cvlab_estimator_config estimator_config(const RunConfig& c, bool need_seed) {
    cvlab_estimator_config e;
    cvlab_estimator_config_init(&e);
    e.version = parse_choice<cvlab_version_kind>(
        c, "estimator", "version",
        {{"cvn", CVLAB_CVN}, {"cvk", CVLAB_CVK}, {"cvkr", CVLAB_CVKR}, {"cvkm", CVLAB_CVKM}, {"loob", CVLAB_LOOB}},
        CVLAB_CVK);
    if (!c.has("estimator", "version")) throw ConfigError("missing required key [estimator] version");
    e.variant = parse_choice<cvlab_variant>(
        c, "estimator", "variant",
        {{"pooled", CVLAB_POOLED}, {"partitioned", CVLAB_PARTITIONED}, {"reduced", CVLAB_REDUCED}}, CVLAB_POOLED);
    e.metric = parse_choice<cvlab_metric>(c, "estimator", "metric", {{"error", CVLAB_ERROR}, {"auc", CVLAB_AUC}},
                                          CVLAB_ERROR);
    e.model = sampling_model(c, "estimator");
    e.th = c.real_or("estimator", "th", 0.0);
    e.strict = c.flag_or("estimator", "strict", false) ? 1 : 0;
    e.threads = threads_of(c);

    const bool cv = e.version == CVLAB_CVK || e.version == CVLAB_CVKR || e.version == CVLAB_CVKM;
    if (cv && e.metric == CVLAB_ERROR) e.K = c.u64("estimator", "K");
    if (cv && e.metric == CVLAB_AUC) {
        e.K1 = c.u64("estimator", "K1");
        e.K2 = c.u64("estimator", "K2");
    }
    if (e.version == CVLAB_CVKR || e.version == CVLAB_CVKM) e.M = c.u64("estimator", "M");
    if (e.version == CVLAB_LOOB) e.B = c.u64("estimator", "B");
    if (need_seed && randomized(e.version)) {
        if (!c.has("run", "seed")) throw ConfigError("missing required key [run] seed (randomized estimator)");
        e.seed = c.u64("run", "seed");
    }
    return e;
}

const std::set<std::string> kEstimatorKeys{"version", "variant", "metric", "K", "K1", "K2",
                                           "M", "B", "model", "th", "strict"};
const std::set<std::string> kTrainerKeys{"kind", "ridge"};

int cmd_estimate(const Context& ctx) {
    const RunConfig& c = ctx.cfg;
    c.restrict_to({{"run", {"seed", "threads"}},
                   {"input", {"dataset"}},
                   {"output", {"json", "csv"}},
                   {"estimator", kEstimatorKeys},
                   {"trainer", kTrainerKeys}});
    const cvlab_estimator_config e = estimator_config(c, true);
    const cvlab_trainer_kind kind = trainer_kind(c);
    const double ridge = c.real_or("trainer", "ridge", 1e-6);
    const fs::path data_path = ctx.path("input", "dataset");

    cvlab_dataset* data = nullptr;
    check(cvlab_dataset_from_csv(data_path.c_str(), &data));
    std::unique_ptr<cvlab_dataset, decltype(&cvlab_dataset_free)> data_guard(data, cvlab_dataset_free);
    cvlab_trainer* trainer = nullptr;
    check(cvlab_trainer_create(kind, ridge, &trainer));
    std::unique_ptr<cvlab_trainer, decltype(&cvlab_trainer_free)> trainer_guard(trainer, cvlab_trainer_free);

    cvlab_estimate_result r{};
    OwnedString json, csv;
    check(cvlab_estimate(data, trainer, &e, &r, &json.p, &csv.p));
    if (c.has("output", "json")) write_text(ctx.path("output", "json"), json.str());
    if (c.has("output", "csv")) write_text(ctx.path("output", "csv"), csv.str());
    if (!c.has("output", "json") && !c.has("output", "csv")) std::cout << json.str();
    return kExitOk;
}

int cmd_verify(const Context& ctx) {
    const RunConfig& c = ctx.cfg;
    c.restrict_to({{"verify", {"n_max", "perturb_pmf"}}, {"output", {"report"}}});
    const auto n_max = c.u64("verify", "n_max");
    if (n_max < 2) throw ConfigError("[verify] n_max must be >= 2");
    const bool perturb = c.flag_or("verify", "perturb_pmf", false);

    std::string report;
    auto cb = [](const char* identity, int64_t n, int passed, void* user) {
        auto* out = static_cast<std::string*>(user);
        *out += std::string(passed ? "PASS " : "FAIL ") + identity + " n=" + std::to_string(n) + "\n";
    };
    std::size_t failed = 0;
    check(cvlab_verify(static_cast<int64_t>(n_max), perturb ? 1 : 0, cb, &report, &failed));
    report += failed == 0 ? "all identities hold\n" : std::to_string(failed) + " identity checks failed\n";
    std::cout << report;
    if (c.has("output", "report")) write_text(ctx.path("output", "report"), report);
    return failed == 0 ? kExitOk : kExitVerifyFailed;
}

void write_manifest(const Context& ctx, const std::vector<std::pair<std::string, std::string>>& outputs,
                    nlohmann::ordered_json extra) {
    if (!ctx.cfg.has("output", "manifest")) return;
    nlohmann::ordered_json m;
    m["schema"] = 1;
    m["library_version"] = cvlab_version();
    m["config"] = ctx.cfg.echo();
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& [key, content] : outputs) {
        files.push_back({{"key", key}, {"path", ctx.cfg.str("output", key)}, {"git_blob_sha1", git_blob_sha1(content)}});
    }
    m["outputs"] = files;
    for (auto& [k, v] : extra.items()) m[k] = v;
    write_text(ctx.path("output", "manifest"), m.dump(2) + "\n");
}

int cmd_simulate(const Context& ctx) {
    const RunConfig& c = ctx.cfg;
    c.restrict_to({{"run", {"seed", "threads"}},
                   {"simulation", {"p", "delta", "n1", "n2", "trials", "test_per_class"}},
                   {"estimator", kEstimatorKeys},
                   {"trainer", kTrainerKeys},
                   {"output", {"table", "triples", "manifest"}}});
    cvlab_simulate_config s;
    cvlab_simulate_config_init(&s);
    s.p = c.u64("simulation", "p");
    s.delta = c.real("simulation", "delta");
    s.n1 = c.u64("simulation", "n1");
    s.n2 = c.u64("simulation", "n2");
    s.trials = c.u64_or("simulation", "trials", s.trials);
    s.test_per_class = c.u64_or("simulation", "test_per_class", s.test_per_class);
    if (c.sections().count("estimator")) s.estimator = estimator_config(c, false);
    s.trainer = trainer_kind(c);
    s.ridge = c.real_or("trainer", "ridge", s.ridge);
    s.seed = c.u64("run", "seed");
    s.threads = threads_of(c);
    s.estimator.threads = 1;
    const std::string table_key = "table", triples_key = "triples";
    (void)c.str("output", table_key);

    cvlab_simulation* sim = nullptr;
    check(cvlab_simulate(&s, &sim));
    std::unique_ptr<cvlab_simulation, decltype(&cvlab_simulation_free)> guard(sim, cvlab_simulation_free);
    OwnedString table, triples;
    check(cvlab_simulation_table_csv(sim, &table.p));
    check(cvlab_simulation_triples_csv(sim, &triples.p));

    std::vector<std::pair<std::string, std::string>> outputs;
    write_text(ctx.path("output", table_key), table.str());
    outputs.emplace_back(table_key, table.str());
    if (c.has("output", triples_key)) {
        write_text(ctx.path("output", triples_key), triples.str());
        outputs.emplace_back(triples_key, triples.str());
    }
    cvlab_decomposition d{};
    check(cvlab_simulation_decomposition(sim, &d));
    nlohmann::ordered_json extra;
    extra["trials_completed"] = cvlab_simulation_triple_count(sim);
    extra["trials_aborted"] = cvlab_simulation_aborted(sim);
    if (!d.degenerate) extra["identity_residual"] = d.residual;
    write_manifest(ctx, outputs, extra);
    std::cout << table.str();
    return kExitOk;
}

int cmd_ratio_curve(const Context& ctx) {
    const RunConfig& c = ctx.cfg;
    c.restrict_to({{"run", {"seed", "threads"}},
                   {"ratio", {"n1_grid", "B", "model", "replicates"}},
                   {"trainer", kTrainerKeys},
                   {"output", {"ratio", "manifest"}}});
    const auto grid = c.u64_list("ratio", "n1_grid");
    std::vector<size_t> n1(grid.begin(), grid.end());
    cvlab_ratio_config r;
    cvlab_ratio_config_init(&r);
    r.n1_grid = n1.data();
    r.grid_len = n1.size();
    r.trainer = trainer_kind(c);
    r.ridge = c.real_or("trainer", "ridge", r.ridge);
    r.B = c.u64_or("ratio", "B", r.B);
    r.model = sampling_model(c, "ratio");
    r.replicates = c.u64_or("ratio", "replicates", r.replicates);
    r.seed = c.u64("run", "seed");
    r.threads = threads_of(c);
    (void)c.str("output", "ratio");

    cvlab_ratio_curve* curve = nullptr;
    check(cvlab_ratio_curve_run(&r, &curve));
    std::unique_ptr<cvlab_ratio_curve, decltype(&cvlab_ratio_curve_free)> guard(curve, cvlab_ratio_curve_free);
    OwnedString csv;
    check(cvlab_ratio_curve_csv(curve, &csv.p));
    write_text(ctx.path("output", "ratio"), csv.str());
    write_manifest(ctx, {{"ratio", csv.str()}}, nlohmann::ordered_json::object());
    std::cout << csv.str();
    return kExitOk;
}

int cmd_decompose(const Context& ctx) {
    const RunConfig& c = ctx.cfg;
    c.restrict_to({{"input", {"paired"}}, {"output", {"json", "csv"}}});
    const fs::path in = ctx.path("input", "paired");
    cvlab_decomposition d{};
    OwnedString json, csv;
    check(cvlab_decompose_csv(in.c_str(), &d, &json.p, &csv.p));
    if (c.has("output", "json")) write_text(ctx.path("output", "json"), json.str());
    if (c.has("output", "csv")) write_text(ctx.path("output", "csv"), csv.str());
    std::cout << csv.str();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-validation and bootstrap estimators of error rate and AUC"};
    app.set_version_flag("--version", std::string(cvlab_version()));
    app.require_subcommand(1);
    std::string config_path;
    using Handler = int (*)(const Context&);
    Handler handler = nullptr;
    struct Command {
        const char* name;
        const char* help;
        Handler fn;
    };
    const Command commands[] = {
        {"estimate", "run one estimator on a dataset CSV", cmd_estimate},
        {"verify", "check the exact bootstrap identities", cmd_verify},
        {"simulate", "Monte-Carlo campaign: true vs apparent vs estimated AUC", cmd_simulate},
        {"ratio-curve", "partitioned/pooled bootstrap ratio over a grid of n1", cmd_ratio_curve},
        {"decompose", "MSE decomposition of a paired (s, s_hat) sample", cmd_decompose},
    };
    for (const auto& [name, help, fn] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("config", config_path, "configuration file")->required();
        sub->callback([&handler, fn = fn] { handler = fn; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        Context ctx{RunConfig::parse(read_text(config_path)), fs::path(config_path).parent_path()};
        return handler(ctx);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ApiFailure& e) {
        std::cerr << (e.exit_code == kExitInput ? "input error: " : "estimation error: ") << e.message << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimation;
    }
}
