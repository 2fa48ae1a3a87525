#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chatdom/corpus.hpp"
#include "json.hpp"

namespace chatdom {

// Word lists used by the lexicon-driven indicators. Entries are matched
// against case-folded whole tokens.
struct LexiconConfig {
    std::set<std::string> choice_terms;
    std::set<std::string> time_terms;
    std::set<std::string> self_terms;
    int min_allcaps_len = 2;

    // Suspect names of the hidden-profile case, default time and
    // first-person lists.
    static LexiconConfig defaults();

    // Throws ConfigError on empty, non-lowercase or whitespace-bearing
    // entries, or min_allcaps_len < 1.
    void validate() const;
};

// Reads {"choice_terms": [...], "time_terms": [...], "self_terms": [...],
// "min_allcaps_len": n}. Absent keys keep their defaults.
LexiconConfig load_lexicon(std::istream& in);
nlohmann::json to_json(const LexiconConfig& cfg);

struct CommentFeatures {
    int comment_length_chars = 0;
    int word_count = 0;
    double average_word_length = 0.0;
    int choice_reference = 0;
    int all_caps_words = 0;
    int time_reference = 0;  // 0/1 per comment
    int exclamation_points = 0;
    int question_marks = 0;
    int self_references = 0;

    bool operator==(const CommentFeatures&) const = default;
};

// Regression column names for the CommentFeatures fields, in field order.
const std::vector<std::string>& feature_column_names();
// Field values in the same order.
std::vector<double> feature_values(const CommentFeatures& f);

std::vector<std::string> tokenize(std::string_view text);

int count_all_caps(std::string_view text, const LexiconConfig& cfg);
int count_time_references(std::string_view text, const LexiconConfig& cfg);
int count_exclamations(std::string_view text);
int count_question_marks(std::string_view text);
int count_self_references(std::string_view text, const LexiconConfig& cfg);
// Throws ConfigError when cfg.choice_terms is empty.
int count_choice_references(std::string_view text, const LexiconConfig& cfg);

CommentFeatures extract_features(const Comment& comment, const LexiconConfig& cfg);
CommentFeatures extract_features(std::string_view text, const LexiconConfig& cfg);
std::vector<CommentFeatures> extract_all(const Transcript& t, const LexiconConfig& cfg);

struct ParticipantAggregate {
    std::string participant_id;
    int comment_count = 0;
    long comment_length_chars = 0;
    long word_count = 0;
    double average_word_length = 0.0;  // sum of per-comment averages
    long choice_reference = 0;
    long all_caps_words = 0;
    long time_reference = 0;
    long exclamation_points = 0;
    long question_marks = 0;
    long self_references = 0;
};

// One entry per participant with at least one comment, in order of first
// appearance. Throws ConfigError when features and comments differ in
// length.
std::vector<ParticipantAggregate> aggregate_participant(const Transcript& t,
                                                        std::span<const CommentFeatures> features);

// group_id,seq,participant_id, then the CommentFeatures fields.
void write_feature_csv(std::ostream& out, const Transcript& t, std::span<const CommentFeatures> features);
void write_aggregate_csv(std::ostream& out, const std::string& group_id,
                         std::span<const ParticipantAggregate> aggregates, bool header = true);

}  // namespace chatdom
