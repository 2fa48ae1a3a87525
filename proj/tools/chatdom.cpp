// chatdom: dominance indicators and models for chat transcripts.
//
// Exit codes: 0 success, 1 I/O or unexpected error, 2 parse error,
// 3 configuration or usage error, 4 modeling error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "chatdom/error.hpp"
#include "chatdom/pipeline.hpp"

namespace {

using chatdom::pipeline::CommandResult;
using chatdom::pipeline::RunConfig;

enum ExitCode { kOk = 0, kIo = 1, kParse = 2, kConfig = 3, kModel = 4 };

struct Flags {
    std::vector<std::string> transcripts;
    std::string config_path, annotations, resolutions, lexicon, model, output_dir, sd;
    std::vector<std::string> formats;
    double threshold = 0.5, tol = 1e-8, beta_bound = 30.0, ridge = 0.0;
    int max_iter = 100;
    bool fallback = false;
};

// Config file keys use the same kebab-case names as the flags.
void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw chatdom::IoError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
        if (!j.is_object()) throw chatdom::ConfigError(path + ": config must be a JSON object");
        static const std::set<std::string> known = {
            "transcripts", "annotations", "resolutions", "lexicon",   "model",     "threshold", "output-dir",
            "formats",     "tol",         "max-iter",    "beta-bound", "ridge",    "sd",        "fallback-coder-a"};
        for (const auto& [key, value] : j.items())
            if (!known.contains(key)) throw chatdom::ConfigError(path + ": unknown config key '" + key + "'");
        if (j.contains("transcripts")) cfg.transcripts = j["transcripts"].get<std::vector<std::string>>();
        if (j.contains("annotations")) cfg.annotations = j["annotations"].get<std::string>();
        if (j.contains("resolutions")) cfg.resolutions = j["resolutions"].get<std::string>();
        if (j.contains("lexicon")) cfg.lexicon = j["lexicon"].get<std::string>();
        if (j.contains("model")) cfg.model = j["model"].get<std::string>();
        if (j.contains("threshold")) cfg.threshold = j["threshold"].get<double>();
        if (j.contains("output-dir")) cfg.output_dir = j["output-dir"].get<std::string>();
        if (j.contains("formats")) {
            const auto f = j["formats"].get<std::vector<std::string>>();
            cfg.formats = {f.begin(), f.end()};
        }
        if (j.contains("tol")) cfg.fit.tol = j["tol"].get<double>();
        if (j.contains("max-iter")) cfg.fit.max_iter = j["max-iter"].get<int>();
        if (j.contains("beta-bound")) cfg.fit.beta_bound = j["beta-bound"].get<double>();
        if (j.contains("ridge")) cfg.fit.ridge = j["ridge"].get<double>();
        if (j.contains("sd")) {
            const auto sd = j["sd"].get<std::string>();
            if (sd != "population" && sd != "sample") throw chatdom::ConfigError(path + ": sd must be population or sample");
            cfg.sd_kind = sd == "sample" ? chatdom::SdKind::Sample : chatdom::SdKind::Population;
        }
        if (j.contains("fallback-coder-a")) cfg.fallback_coder_a = j["fallback-coder-a"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw chatdom::ConfigError(path + ": " + e.what());
    }
}

RunConfig resolve(const CLI::App& sub, const Flags& f) {
    RunConfig cfg;
    auto given = [&](const char* name) {
        const CLI::Option* opt = sub.get_option_no_throw(name);
        return opt && opt->count() > 0;
    };
    if (!f.config_path.empty()) apply_config_file(f.config_path, cfg);
    if (const char* env = std::getenv("CHATDOM_OUTPUT_DIR"); env && *env) cfg.output_dir = env;

    if (given("transcripts")) cfg.transcripts = f.transcripts;
    if (given("--annotations")) cfg.annotations = f.annotations;
    if (given("--resolutions")) cfg.resolutions = f.resolutions;
    if (given("--lexicon")) cfg.lexicon = f.lexicon;
    if (given("--model")) cfg.model = f.model;
    if (given("--threshold")) cfg.threshold = f.threshold;
    if (given("--output-dir")) cfg.output_dir = f.output_dir;
    if (given("--formats")) cfg.formats = {f.formats.begin(), f.formats.end()};
    if (given("--tol")) cfg.fit.tol = f.tol;
    if (given("--max-iter")) cfg.fit.max_iter = f.max_iter;
    if (given("--beta-bound")) cfg.fit.beta_bound = f.beta_bound;
    if (given("--ridge")) cfg.fit.ridge = f.ridge;
    if (given("--sd")) cfg.sd_kind = f.sd == "sample" ? chatdom::SdKind::Sample : chatdom::SdKind::Population;
    if (given("--fallback-coder-a")) cfg.fallback_coder_a = f.fallback;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chatdom: dominance indicators, logit models and dominant-member detection for chat transcripts"};
    app.require_subcommand(1);
    Flags f;

    struct Spec {
        const char* name;
        const char* help;
        CommandResult (*run)(const RunConfig&);
        bool lexicon, annotations, resolutions, fit, score, dominance;
    };
    const Spec specs[] = {
        {"stats", "Per-group and corpus descriptive statistics", chatdom::pipeline::cmd_stats, false, false, false, false, false, false},
        {"extract", "Per-comment indicator matrix and per-participant sums", chatdom::pipeline::cmd_extract, true, false, false, false, false, false},
        {"kappa", "Inter-coder agreement and Cohen's kappa", chatdom::pipeline::cmd_kappa, false, true, false, false, false, false},
        {"reconcile", "Apply consensus values to coder disagreements", chatdom::pipeline::cmd_reconcile, false, true, true, false, false, false},
        {"fit", "Fit the automatic, manual and combined logit models", chatdom::pipeline::cmd_fit, true, true, false, true, false, false},
        {"score", "Score comments with a model and flag dominant members", chatdom::pipeline::cmd_score, true, true, false, false, true, true},
        {"report", "Dominance shares from consensus ED labels", chatdom::pipeline::cmd_report, false, true, false, false, false, true},
    };

    std::vector<std::pair<CLI::App*, const Spec*>> subs;
    for (const Spec& s : specs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("transcripts", f.transcripts, "Transcript CSV files (one group each)");
        sub->add_option("--config", f.config_path, "JSON run configuration; flags override it");
        sub->add_option("-o,--output-dir", f.output_dir, "Output directory (env CHATDOM_OUTPUT_DIR)");
        sub->add_option("--formats", f.formats, "Output formats: csv json svg")->delimiter(',');
        if (s.lexicon) sub->add_option("--lexicon", f.lexicon, "Lexicon JSON");
        if (s.annotations) sub->add_option("--annotations", f.annotations, "Annotation CSV");
        if (s.resolutions) sub->add_option("--resolutions", f.resolutions, "Resolution CSV (group_id,seq,resolved)");
        if (s.annotations && !s.resolutions)
            sub->add_flag("--fallback-coder-a", f.fallback, "Use coder A where ED labels are unresolved");
        if (s.fit) {
            sub->add_option("--tol", f.tol, "Gradient max-norm tolerance");
            sub->add_option("--max-iter", f.max_iter, "Newton iteration limit");
            sub->add_option("--beta-bound", f.beta_bound, "Separation bound on |coefficient|");
            sub->add_option("--ridge", f.ridge, "L2 penalty on non-intercept coefficients");
        }
        if (s.score) {
            sub->add_option("--model", f.model, "Model JSON to score with");
            sub->add_option("--threshold", f.threshold, "Decision threshold on probability (strict >)");
        }
        if (s.dominance)
            sub->add_option("--sd", f.sd, "SD over shares: population or sample")
                ->check(CLI::IsMember({"population", "sample"}));
        subs.emplace_back(sub, &s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    for (const auto& [sub, spec] : subs) {
        if (!sub->parsed()) continue;
        try {
            const RunConfig cfg = resolve(*sub, f);
            const CommandResult result = spec->run(cfg);
            chatdom::pipeline::write_outputs(cfg.output_dir, result);
            for (const auto& n : result.notices) std::cerr << "note: " << n << '\n';
            for (const auto& [name, content] : result.files) std::cout << cfg.output_dir << '/' << name << '\n';
            return kOk;
        } catch (const chatdom::ParseError& e) {
            std::cerr << "parse error: " << e.what() << '\n';
            return kParse;
        } catch (const chatdom::ConfigError& e) {
            std::cerr << "configuration error: " << e.what() << '\n';
            return kConfig;
        } catch (const chatdom::ModelError& e) {
            std::cerr << "model error: " << e.what() << '\n';
            return kModel;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kIo;
        }
    }
    return kConfig;
}
