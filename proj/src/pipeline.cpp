#include "chatdom/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chatdom/csv.hpp"
#include "chatdom/error.hpp"
#include "chatdom/svg_chart.hpp"
#include "chatdom/text.hpp"

namespace chatdom::pipeline {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return in;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

AnnotationSet load_annotation_file(const std::string& path, const std::vector<Transcript>& transcripts) {
    auto in = open_input(path);
    try {
        return load_annotations(in, transcripts);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

AnnotationSet require_annotations(const RunConfig& config, const std::vector<Transcript>& transcripts,
                                  const char* command) {
    if (!config.annotations) throw ConfigError(std::string(command) + " needs --annotations");
    return load_annotation_file(*config.annotations, transcripts);
}

// ED labels in transcript comment order.
std::vector<int> ordered_labels(const std::vector<Transcript>& transcripts, const AnnotationSet& set,
                                bool fallback_coder_a) {
    std::vector<EDLabelSet> labels;
    for (const Transcript& t : transcripts)
        for (const Comment& c : t.comments()) labels.push_back(set.entries.at({c.group_id, c.seq}).ed);
    return final_labels(labels, fallback_coder_a);
}

bool wants(const RunConfig& config, const char* format) { return config.formats.contains(format); }

void add_dominance_outputs(const RunConfig& config, const DominanceReport& report, CommandResult& result) {
    if (wants(config, "json")) result.files["dominance.json"] = dump(to_json(report));
    if (wants(config, "csv")) {
        std::ostringstream os;
        write_dominance_csv(os, report);
        result.files["dominance.csv"] = os.str();
    }
    if (wants(config, "svg")) result.files["dominance.svg"] = render_share_chart(report);
    for (const auto& w : report.warnings) result.notices.push_back(w);
}

glm::LogitModel fit_named(const std::string& name, const PredictorTable& table, const std::vector<int>& labels,
                          const glm::FitOptions& options) {
    try {
        const auto design = glm::DesignMatrix::build(table.columns, table.rows, labels);
        return glm::fit(design, options);
    } catch (const ModelError& e) {
        throw ModelError(name + ": " + e.what());
    }
}

}  // namespace

void validate(const RunConfig& config) {
    if (config.transcripts.empty()) throw ConfigError("at least one transcript is required");
    for (const auto& f : config.formats)
        if (f != "csv" && f != "json" && f != "svg")
            throw ConfigError("unknown output format '" + f + "' (expected csv, json or svg)");
    if (!(config.threshold >= 0.0 && config.threshold <= 1.0))
        throw ConfigError("decision threshold must lie in [0, 1]");
}

std::vector<Transcript> load_transcripts(const std::vector<std::string>& paths, std::vector<std::string>* warnings) {
    std::vector<Transcript> out;
    std::set<std::string> groups;
    for (const std::string& path : paths) {
        auto in = open_input(path);
        try {
            ParseResult r = parse_transcript(in);
            if (!groups.insert(r.transcript.group_id()).second)
                throw ConfigError(path + ": group '" + r.transcript.group_id() + "' appears in more than one file");
            if (warnings)
                for (const auto& w : r.warnings) warnings->push_back(path + ": " + w);
            out.push_back(std::move(r.transcript));
        } catch (const EmptyTranscriptError&) {
            throw ParseError(path + ": empty transcript");
        } catch (const ParseError& e) {
            throw ParseError(path + ": " + e.what());
        }
    }
    return out;
}

LexiconConfig load_lexicon_file(const std::optional<std::string>& path) {
    if (!path) return LexiconConfig::defaults();
    auto in = open_input(*path);
    try {
        return load_lexicon(in);
    } catch (const ConfigError& e) {
        throw ConfigError(*path + ": " + e.what());
    }
}

std::vector<std::string> model1_columns() { return feature_column_names(); }

std::vector<std::string> model2_columns() { return manual_column_names(); }

std::vector<std::string> model3_columns() {
    std::vector<std::string> cols = manual_column_names();
    const auto& a = feature_column_names();
    cols.insert(cols.end(), a.begin(), a.end());
    return cols;
}

PredictorTable predictor_table(const std::vector<Transcript>& transcripts, const LexiconConfig& lexicon,
                               const AnnotationSet* annotations) {
    PredictorTable table;
    table.columns = feature_column_names();
    if (annotations) {
        const auto& m = manual_column_names();
        table.columns.insert(table.columns.end(), m.begin(), m.end());
    }
    for (const Transcript& t : transcripts)
        for (const Comment& c : t.comments()) {
            std::vector<double> row = feature_values(extract_features(c, lexicon));
            if (annotations) {
                const auto mv = manual_values(annotations->entries.at({c.group_id, c.seq}).codes);
                row.insert(row.end(), mv.begin(), mv.end());
            }
            table.keys.push_back({c.group_id, c.seq});
            table.rows.push_back(std::move(row));
        }
    return table;
}

PredictorTable select_columns(const PredictorTable& table, const std::vector<std::string>& columns) {
    std::vector<std::size_t> idx;
    std::vector<std::string> missing;
    for (const auto& c : columns) {
        auto it = std::find(table.columns.begin(), table.columns.end(), c);
        if (it == table.columns.end())
            missing.push_back(c);
        else
            idx.push_back(static_cast<std::size_t>(it - table.columns.begin()));
    }
    if (!missing.empty()) {
        std::string msg = "predictor columns unavailable:";
        for (const auto& m : missing) msg += " " + m;
        throw ModelError(msg);
    }
    PredictorTable out;
    out.columns = columns;
    out.keys = table.keys;
    out.rows.reserve(table.rows.size());
    for (const auto& r : table.rows) {
        std::vector<double> row;
        row.reserve(idx.size());
        for (std::size_t i : idx) row.push_back(r[i]);
        out.rows.push_back(std::move(row));
    }
    return out;
}

CommandResult cmd_stats(const RunConfig& config) {
    validate(config);
    CommandResult result;
    const auto transcripts = load_transcripts(config.transcripts, &result.notices);
    const CorpusStats stats = corpus_stats(transcripts);
    if (!stats.comments.sd_defined)
        result.notices.push_back("single group: standard deviations are undefined and reported as 0");

    if (wants(config, "json")) result.files["stats.json"] = dump(to_json(stats));
    if (wants(config, "csv")) {
        std::ostringstream os;
        os << "group_id,comment_count,char_length_total,word_count_total\n";
        for (const auto& g : stats.groups)
            csv::write_row(os, {g.group_id, std::to_string(g.comment_count), std::to_string(g.char_length_total),
                                std::to_string(g.word_count_total)});
        os << "\ndata_item,total,mean,sd,sd_defined,min,max\n";
        auto line = [&](const char* name, const FieldSummary& f) {
            os << name << ',' << f.total << ',' << text::format_number(f.mean) << ',' << text::format_number(f.sd)
               << ',' << (f.sd_defined ? "true" : "false") << ',' << f.min << ',' << f.max << '\n';
        };
        line("comments", stats.comments);
        line("length", stats.length);
        line("words", stats.words);
        result.files["stats.csv"] = os.str();
    }
    return result;
}

CommandResult cmd_extract(const RunConfig& config) {
    validate(config);
    CommandResult result;
    const auto transcripts = load_transcripts(config.transcripts, &result.notices);
    const LexiconConfig lexicon = load_lexicon_file(config.lexicon);

    std::ostringstream features_csv, agg_csv;
    nlohmann::json agg_json = nlohmann::json::array();
    bool first = true;
    for (const Transcript& t : transcripts) {
        const auto features = extract_all(t, lexicon);
        std::ostringstream one;
        write_feature_csv(one, t, features);
        std::string body = one.str();
        if (!first) body.erase(0, body.find('\n') + 1);
        features_csv << body;

        const auto aggregates = aggregate_participant(t, features);
        write_aggregate_csv(agg_csv, t.group_id(), aggregates, first);
        for (const auto& a : aggregates)
            agg_json.push_back({{"group_id", t.group_id()},
                                {"participant_id", a.participant_id},
                                {"comment_count", a.comment_count},
                                {"comment_length_chars", a.comment_length_chars},
                                {"word_count", a.word_count},
                                {"average_word_length", std::stod(text::format_number(a.average_word_length))},
                                {"choice_reference", a.choice_reference},
                                {"all_caps_words", a.all_caps_words},
                                {"time_reference", a.time_reference},
                                {"exclamation_points", a.exclamation_points},
                                {"question_marks", a.question_marks},
                                {"self_references", a.self_references}});
        first = false;
    }
    if (wants(config, "csv")) {
        result.files["features.csv"] = features_csv.str();
        result.files["participants.csv"] = agg_csv.str();
    }
    if (wants(config, "json")) result.files["participants.json"] = dump(agg_json);
    return result;
}

CommandResult cmd_kappa(const RunConfig& config) {
    validate(config);
    CommandResult result;
    const auto transcripts = load_transcripts(config.transcripts, &result.notices);
    const AnnotationSet set = require_annotations(config, transcripts, "kappa");
    if (!set.has_both_coders())
        throw ConfigError("kappa needs two coder columns (ed_a and ed_b) in the annotation file");
    const auto reports = reliability_by_column(set);

    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports) {
        j.push_back(to_json(r));
        if (!r.kappa.kappa)
            result.notices.push_back("column '" + r.column + "': kappa undefined (chance agreement is 1)");
    }
    result.files["reliability.json"] = dump(j);
    if (wants(config, "csv")) {
        std::ostringstream os;
        os << "column,n_items,percent_agreement,po,pe,cohens_kappa\n";
        for (const auto& r : reports)
            csv::write_row(os, {r.column, std::to_string(r.n_items), text::format_number(r.percent_agreement),
                                text::format_number(r.kappa.po), text::format_number(r.kappa.pe),
                                r.kappa.kappa ? text::format_number(*r.kappa.kappa) : "undefined"});
        result.files["reliability.csv"] = os.str();
    }
    for (const auto& w : set.warnings()) result.notices.push_back(w);
    return result;
}

CommandResult cmd_reconcile(const RunConfig& config) {
    validate(config);
    CommandResult result;
    const auto transcripts = load_transcripts(config.transcripts, &result.notices);
    AnnotationSet set = require_annotations(config, transcripts, "reconcile");

    std::map<CommentKey, int> resolutions;
    if (config.resolutions) {
        auto in = open_input(*config.resolutions);
        try {
            resolutions = load_resolutions(in);
        } catch (const ParseError& e) {
            throw ParseError(*config.resolutions + ": " + e.what());
        }
    }
    const auto labels = set.labels();
    const auto reconciled = reconcile(labels, resolutions);
    for (const auto& l : reconciled) set.entries.at(l.key).ed = l;
    set.columns.insert("resolved");

    std::ostringstream os;
    write_annotations_csv(os, set);
    result.files["annotations.reconciled.csv"] = os.str();
    std::size_t changed = 0;
    for (const auto& l : labels) changed += !l.agrees();
    result.notices.push_back(std::to_string(changed) + " disagreement(s) carry a consensus value");
    return result;
}

CommandResult cmd_fit(const RunConfig& config) {
    validate(config);
    if (config.model) throw ConfigError("fit trains models; --model belongs to `score`");
    CommandResult result;
    const auto transcripts = load_transcripts(config.transcripts, &result.notices);
    const LexiconConfig lexicon = load_lexicon_file(config.lexicon);
    const AnnotationSet set = require_annotations(config, transcripts, "fit");
    const std::vector<int> labels = ordered_labels(transcripts, set, config.fallback_coder_a);

    const bool manual = set.has_manual_codes();
    const PredictorTable table = predictor_table(transcripts, lexicon, manual ? &set : nullptr);

    std::vector<std::pair<std::string, glm::LogitModel>> models;
    models.emplace_back("model1", fit_named("Model 1", select_columns(table, model1_columns()), labels, config.fit));
    if (manual) {
        models.emplace_back("model2", fit_named("Model 2", select_columns(table, model2_columns()), labels, config.fit));
        models.emplace_back("model3", fit_named("Model 3", select_columns(table, model3_columns()), labels, config.fit));
    } else {
        result.notices.push_back("annotation file has no manual code columns; Models 2 and 3 skipped");
    }

    std::ostringstream coef;
    const char* titles[] = {"Model 1 (automatically coded variables)", "Model 2 (manually coded variables)",
                            "Model 3 (automatically and manually coded variables)"};
    for (std::size_t k = 0; k < models.size(); ++k) {
        const auto& [name, m] = models[k];
        result.files[name + ".json"] = dump(glm::to_json(m));
        if (k) coef << '\n';
        glm::write_coefficient_table(coef, titles[k], m);
        if (!m.converged)
            result.notices.push_back(name + " did not converge" + (m.separation ? ": " + *m.separation : std::string()));
    }
    if (wants(config, "csv")) result.files["coefficients.csv"] = coef.str();

    if (models.size() >= 2) {
        const auto ranking = glm::compare_models(models);
        std::ostringstream os;
        os << "rank,model,aic,delta_aic,n_params\n";
        nlohmann::json j = nlohmann::json::array();
        for (std::size_t k = 0; k < ranking.size(); ++k) {
            const auto& r = ranking[k];
            os << k + 1 << ',' << r.name << ',' << text::format_number(r.aic) << ','
               << text::format_number(r.delta) << ',' << r.n_params << '\n';
            j.push_back({{"rank", k + 1},
                         {"model", r.name},
                         {"aic", std::stod(text::format_number(r.aic))},
                         {"delta_aic", std::stod(text::format_number(r.delta))},
                         {"n_params", r.n_params}});
        }
        if (wants(config, "csv")) result.files["comparison.csv"] = os.str();
        if (wants(config, "json")) result.files["comparison.json"] = dump(j);
    }
    for (const auto& w : set.warnings()) result.notices.push_back(w);
    return result;
}

CommandResult cmd_score(const RunConfig& config) {
    validate(config);
    if (!config.model) throw ConfigError("score needs --model");
    CommandResult result;
    const auto transcripts = load_transcripts(config.transcripts, &result.notices);
    const LexiconConfig lexicon = load_lexicon_file(config.lexicon);

    glm::LogitModel model;
    {
        auto in = open_input(*config.model);
        try {
            model = glm::load_model(in);
        } catch (const ConfigError& e) {
            throw ConfigError(*config.model + ": " + e.what());
        }
    }
    std::optional<AnnotationSet> set;
    if (config.annotations) set = load_annotation_file(*config.annotations, transcripts);

    const PredictorTable full = predictor_table(transcripts, lexicon, set && set->has_manual_codes() ? &*set : nullptr);
    const std::vector<std::string> wanted(model.names.begin() + 1, model.names.end());
    const auto scores = score_comments(model, select_columns(full, wanted), config.threshold);

    std::vector<int> predicted;
    predicted.reserve(scores.size());
    for (const auto& s : scores) predicted.push_back(s.predicted_ed);
    const DominanceReport report = dominance_shares(predicted, transcripts, config.sd_kind);

    if (wants(config, "csv")) {
        std::ostringstream os;
        write_scores_csv(os, scores);
        result.files["scores.csv"] = os.str();
    }
    add_dominance_outputs(config, report, result);

    if (set) {
        const std::vector<int> reference = ordered_labels(transcripts, *set, config.fallback_coder_a);
        std::map<CommentKey, int> ref;
        for (std::size_t k = 0; k < scores.size(); ++k) ref[scores[k].key] = reference[k];
        const auto eval = evaluate_scoring(scores, ref);
        if (wants(config, "json")) result.files["evaluation.json"] = dump(to_json(eval));
    }
    return result;
}

CommandResult cmd_report(const RunConfig& config) {
    validate(config);
    CommandResult result;
    const auto transcripts = load_transcripts(config.transcripts, &result.notices);
    const AnnotationSet set = require_annotations(config, transcripts, "report");
    const std::vector<int> labels = ordered_labels(transcripts, set, config.fallback_coder_a);
    add_dominance_outputs(config, dominance_shares(labels, transcripts, config.sd_kind), result);
    return result;
}

void write_outputs(const std::string& output_dir, const CommandResult& result) {
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + output_dir + "': " + ec.message());
    for (const auto& [name, content] : result.files) {
        const fs::path path = fs::path(output_dir) / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        out << content;
        if (!out) throw IoError("failed writing '" + path.string() + "'");
    }
}

}  // namespace chatdom::pipeline
