#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chatdom/annotations.hpp"
#include "chatdom/corpus.hpp"
#include "chatdom/dominance.hpp"
#include "chatdom/features.hpp"
#include "chatdom/glm.hpp"

// End-to-end commands behind the CLI. Each command computes everything in
// memory and returns the files to write, so a failing run leaves no
// partial outputs.
namespace chatdom::pipeline {

struct RunConfig {
    std::vector<std::string> transcripts;
    std::optional<std::string> annotations;
    std::optional<std::string> resolutions;
    std::optional<std::string> lexicon;
    std::optional<std::string> model;  // scoring mode
    glm::FitOptions fit;
    double threshold = 0.5;
    std::string output_dir = "out";
    std::set<std::string> formats = {"csv", "json", "svg"};
    SdKind sd_kind = SdKind::Population;
    bool fallback_coder_a = false;
};

// Throws ConfigError on unknown formats or an empty transcript list.
void validate(const RunConfig& config);

struct CommandResult {
    std::map<std::string, std::string> files;  // relative name -> content
    std::vector<std::string> notices;
};

CommandResult cmd_stats(const RunConfig& config);
CommandResult cmd_extract(const RunConfig& config);
CommandResult cmd_kappa(const RunConfig& config);
CommandResult cmd_reconcile(const RunConfig& config);
CommandResult cmd_fit(const RunConfig& config);
CommandResult cmd_score(const RunConfig& config);
CommandResult cmd_report(const RunConfig& config);

// Creates the directory and writes every file.
void write_outputs(const std::string& output_dir, const CommandResult& result);

// Shared loaders, exposed for tests. Errors carry the file path.
std::vector<Transcript> load_transcripts(const std::vector<std::string>& paths,
                                         std::vector<std::string>* warnings = nullptr);
LexiconConfig load_lexicon_file(const std::optional<std::string>& path);

// Model column sets: automatic (Model 1), manual (Model 2), both (Model 3).
std::vector<std::string> model1_columns();
std::vector<std::string> model2_columns();
std::vector<std::string> model3_columns();

// Predictor rows for every comment of the transcripts, in order. Manual
// columns are included when annotations are given.
PredictorTable predictor_table(const std::vector<Transcript>& transcripts, const LexiconConfig& lexicon,
                               const AnnotationSet* annotations);
// Restricts a table to the given columns; ModelError naming absent ones.
PredictorTable select_columns(const PredictorTable& table, const std::vector<std::string>& columns);

}  // namespace chatdom::pipeline
