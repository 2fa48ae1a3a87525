#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "chatdom/corpus.hpp"
#include "json.hpp"

namespace chatdom {

struct CommentKey {
    std::string group_id;
    std::size_t seq = 0;

    auto operator<=>(const CommentKey&) const = default;
    std::string str() const { return group_id + "#" + std::to_string(seq); }
};

// Human-coded per-comment categories. Every field is a 0/1 flag except
// choice_reference_pro, a count of choice mentions including pronouns.
struct ManualCodes {
    int humor = 0;
    int humor_appreciated = 0;
    int profanity = 0;
    int questions = 0;
    int answers = 0;
    int call_for_vote = 0;
    int organizational = 0;
    int asymmetric_info = 0;
    int refocus = 0;
    int choice_reference_pro = 0;

    bool operator==(const ManualCodes&) const = default;
};

// CSV column names of the nine binary flags, in ManualCodes field order.
const std::vector<std::string>& manual_flag_columns();
// Regression column names of the manual model, in model order
// (Humor ... Refocus, ChoiceReferencePro).
const std::vector<std::string>& manual_column_names();
std::vector<double> manual_values(const ManualCodes& m);
int manual_flag(const ManualCodes& m, std::size_t flag_index);

// Expression-of-Dominance labels from two independent coders.
struct EDLabelSet {
    CommentKey key;
    int coder_a = 0;
    int coder_b = 0;
    std::optional<int> resolved;

    bool agrees() const { return coder_a == coder_b; }
    bool unresolved() const { return !agrees() && !resolved; }
    // Consensus value, absent while unresolved.
    std::optional<int> final_value() const;

    bool operator==(const EDLabelSet&) const = default;
};

struct Annotation {
    ManualCodes codes;
    EDLabelSet ed;
    // Second-coder values of binary flags, keyed by flag column name,
    // present only where the file has a "<flag>_b" column.
    std::map<std::string, int> second_coder;
};

struct AnnotationSet {
    std::map<CommentKey, Annotation> entries;
    // Per-field count of values that defaulted to 0 (missing column,
    // empty cell or missing row).
    std::map<std::string, std::size_t> defaulted;
    std::set<std::string> columns;

    bool has_manual_codes() const;
    bool has_both_coders() const { return columns.contains("ed_a") && columns.contains("ed_b"); }
    std::vector<EDLabelSet> labels() const;  // key order
    std::vector<std::string> warnings() const;
};

// CSV keyed by (group_id, seq) with optional columns for each manual
// variable, ed_a, ed_b, resolved and "<flag>_b". Comments without a row
// get all-zero codes. Throws ConfigError listing keys that do not exist
// in the transcripts, ParseError (with line) on non-binary flags,
// negative counts, duplicate keys, or a resolved value contradicting an
// agreed pair.
AnnotationSet load_annotations(std::istream& source, std::span<const Transcript> transcripts);

void write_annotations_csv(std::ostream& out, const AnnotationSet& set);

struct KappaResult {
    double po = 0.0;
    double pe = 0.0;
    std::optional<double> kappa;  // absent when pe == 1
};

struct ReliabilityReport {
    std::string column;
    std::size_t n_items = 0;
    double percent_agreement = 0.0;
    KappaResult kappa;
    // confusion[a][b]: items coder A labelled a and coder B labelled b.
    std::array<std::array<std::size_t, 2>, 2> confusion{};
};

// Both throw ConfigError on an empty list.
double percent_agreement(std::span<const EDLabelSet> labels);
KappaResult cohens_kappa(std::span<const EDLabelSet> labels);

ReliabilityReport reliability(const std::string& column, std::span<const int> coder_a,
                              std::span<const int> coder_b);
// ED first, then every flag that has a second-coder column.
std::vector<ReliabilityReport> reliability_by_column(const AnnotationSet& set);

nlohmann::json to_json(const ReliabilityReport& r);

// Applies consensus values. resolutions must cover every unresolved
// disagreement and may only name disagreeing keys; otherwise ConfigError
// enumerating the offending keys.
std::vector<EDLabelSet> reconcile(std::span<const EDLabelSet> labels,
                                  const std::map<CommentKey, int>& resolutions);

// group_id,seq,resolved
std::map<CommentKey, int> load_resolutions(std::istream& source);

// Final ED vector. Throws ModelError naming unresolved keys unless
// fallback_to_coder_a is set.
std::vector<int> final_labels(std::span<const EDLabelSet> labels, bool fallback_to_coder_a = false);

}  // namespace chatdom
