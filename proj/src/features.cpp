#include "chatdom/features.hpp"

#include <algorithm>
#include <unordered_map>

#include "chatdom/csv.hpp"
#include "chatdom/error.hpp"
#include "chatdom/text.hpp"

namespace chatdom {

namespace {

int count_lexicon(std::string_view s, const std::set<std::string>& terms) {
    int n = 0;
    for (const std::string& tok : text::tokenize(s))
        if (terms.contains(text::fold_case(tok))) ++n;
    return n;
}

int count_char(std::string_view s, char c) {
    return static_cast<int>(std::count(s.begin(), s.end(), c));
}

void check_terms(const std::set<std::string>& terms, const char* name) {
    for (const std::string& t : terms) {
        if (t.empty()) throw ConfigError(std::string(name) + ": empty entry");
        if (!text::is_valid_utf8(t)) throw ConfigError(std::string(name) + ": entry is not UTF-8");
        if (text::fold_case(t) != t)
            throw ConfigError(std::string(name) + ": entry '" + t + "' is not lowercase");
        for (char32_t c : text::decode_utf8(t))
            if (text::is_whitespace(c))
                throw ConfigError(std::string(name) + ": entry '" + t + "' contains whitespace");
    }
}

std::set<std::string> read_terms(const nlohmann::json& j, const char* key, std::set<std::string> fallback) {
    if (!j.contains(key)) return fallback;
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw ConfigError(std::string(key) + " must be an array of strings");
    std::set<std::string> out;
    for (const auto& v : arr) {
        if (!v.is_string()) throw ConfigError(std::string(key) + " must be an array of strings");
        out.insert(v.get<std::string>());
    }
    return out;
}

}  // namespace

LexiconConfig LexiconConfig::defaults() {
    LexiconConfig cfg;
    cfg.choice_terms = {"alex", "mansi", "nali", "john", "donahue"};
    cfg.time_terms = {"time", "min",  "mins", "minute", "minutes", "hour",    "hours",
                      "sec",  "secs", "second", "seconds", "clock", "deadline"};
    cfg.self_terms = {"i", "i'm", "im", "i'll", "i've", "i'd", "me", "my", "mine", "myself"};
    cfg.min_allcaps_len = 2;
    return cfg;
}

void LexiconConfig::validate() const {
    check_terms(choice_terms, "choice_terms");
    check_terms(time_terms, "time_terms");
    check_terms(self_terms, "self_terms");
    if (min_allcaps_len < 1) throw ConfigError("min_allcaps_len must be >= 1");
}

LexiconConfig load_lexicon(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("lexicon is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("lexicon must be a JSON object");
    const LexiconConfig d = LexiconConfig::defaults();
    LexiconConfig cfg;
    cfg.choice_terms = read_terms(j, "choice_terms", d.choice_terms);
    cfg.time_terms = read_terms(j, "time_terms", d.time_terms);
    cfg.self_terms = read_terms(j, "self_terms", d.self_terms);
    cfg.min_allcaps_len = d.min_allcaps_len;
    if (j.contains("min_allcaps_len")) {
        if (!j["min_allcaps_len"].is_number_integer())
            throw ConfigError("min_allcaps_len must be an integer");
        cfg.min_allcaps_len = j["min_allcaps_len"].get<int>();
    }
    cfg.validate();
    return cfg;
}

nlohmann::json to_json(const LexiconConfig& cfg) {
    return {{"choice_terms", cfg.choice_terms},
            {"time_terms", cfg.time_terms},
            {"self_terms", cfg.self_terms},
            {"min_allcaps_len", cfg.min_allcaps_len}};
}

const std::vector<std::string>& feature_column_names() {
    static const std::vector<std::string> names = {
        "CommentLengthChar", "WordCount",          "AverageWordLength",
        "ChoiceReference",   "AllCapsWords",       "TimeReferences",
        "CountExclamationPoints", "CountQuestionMarks", "SelfReferences"};
    return names;
}

std::vector<double> feature_values(const CommentFeatures& f) {
    return {double(f.comment_length_chars), double(f.word_count), f.average_word_length,
            double(f.choice_reference),     double(f.all_caps_words), double(f.time_reference),
            double(f.exclamation_points),   double(f.question_marks), double(f.self_references)};
}

std::vector<std::string> tokenize(std::string_view s) { return text::tokenize(s); }

int count_all_caps(std::string_view s, const LexiconConfig& cfg) {
    int n = 0;
    for (const std::string& tok : text::tokenize(s)) {
        const std::u32string cps = text::decode_utf8(tok);
        if (static_cast<int>(cps.size()) < cfg.min_allcaps_len) continue;
        if (std::all_of(cps.begin(), cps.end(), text::is_upper_alpha)) ++n;
    }
    return n;
}

int count_time_references(std::string_view s, const LexiconConfig& cfg) {
    return count_lexicon(s, cfg.time_terms) > 0 ? 1 : 0;
}

int count_exclamations(std::string_view s) { return count_char(s, '!'); }

int count_question_marks(std::string_view s) { return count_char(s, '?'); }

int count_self_references(std::string_view s, const LexiconConfig& cfg) {
    return count_lexicon(s, cfg.self_terms);
}

int count_choice_references(std::string_view s, const LexiconConfig& cfg) {
    if (cfg.choice_terms.empty()) throw ConfigError("choice_terms is empty; choice references need a lexicon");
    return count_lexicon(s, cfg.choice_terms);
}

CommentFeatures extract_features(std::string_view s, const LexiconConfig& cfg) {
    if (cfg.choice_terms.empty()) throw ConfigError("choice_terms is empty; choice references need a lexicon");

    CommentFeatures f;
    f.comment_length_chars = static_cast<int>(text::scalar_count(s));
    f.exclamation_points = count_exclamations(s);
    f.question_marks = count_question_marks(s);

    const auto tokens = text::tokenize(s);
    f.word_count = static_cast<int>(tokens.size());
    std::size_t letters = 0;
    bool any_time = false;
    for (const std::string& tok : tokens) {
        const std::u32string cps = text::decode_utf8(tok);
        letters += cps.size();
        if (static_cast<int>(cps.size()) >= cfg.min_allcaps_len &&
            std::all_of(cps.begin(), cps.end(), text::is_upper_alpha))
            ++f.all_caps_words;
        const std::string folded = text::fold_case(tok);
        if (cfg.choice_terms.contains(folded)) ++f.choice_reference;
        if (cfg.self_terms.contains(folded)) ++f.self_references;
        if (cfg.time_terms.contains(folded)) any_time = true;
    }
    f.time_reference = any_time ? 1 : 0;
    f.average_word_length = tokens.empty() ? 0.0 : double(letters) / double(tokens.size());
    return f;
}

CommentFeatures extract_features(const Comment& comment, const LexiconConfig& cfg) {
    return extract_features(std::string_view(comment.text), cfg);
}

std::vector<CommentFeatures> extract_all(const Transcript& t, const LexiconConfig& cfg) {
    std::vector<CommentFeatures> out;
    out.reserve(t.size());
    for (const Comment& c : t.comments()) out.push_back(extract_features(c, cfg));
    return out;
}

std::vector<ParticipantAggregate> aggregate_participant(const Transcript& t,
                                                        std::span<const CommentFeatures> features) {
    if (features.size() != t.size())
        throw ConfigError("feature rows (" + std::to_string(features.size()) +
                          ") do not align with comments (" + std::to_string(t.size()) + ")");

    std::vector<ParticipantAggregate> out;
    std::unordered_map<std::string, std::size_t> slot;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const std::string& pid = t.comments()[k].participant_id;
        auto [it, inserted] = slot.try_emplace(pid, out.size());
        if (inserted) out.push_back(ParticipantAggregate{pid});
        ParticipantAggregate& a = out[it->second];
        const CommentFeatures& f = features[k];
        ++a.comment_count;
        a.comment_length_chars += f.comment_length_chars;
        a.word_count += f.word_count;
        a.average_word_length += f.average_word_length;
        a.choice_reference += f.choice_reference;
        a.all_caps_words += f.all_caps_words;
        a.time_reference += f.time_reference;
        a.exclamation_points += f.exclamation_points;
        a.question_marks += f.question_marks;
        a.self_references += f.self_references;
    }
    return out;
}

void write_feature_csv(std::ostream& out, const Transcript& t, std::span<const CommentFeatures> features) {
    if (features.size() != t.size()) throw ConfigError("feature rows do not align with comments");
    out << "group_id,seq,participant_id,comment_length_chars,word_count,average_word_length,"
           "choice_reference,all_caps_words,time_reference,exclamation_points,question_marks,"
           "self_references\n";
    for (std::size_t k = 0; k < t.size(); ++k) {
        const Comment& c = t.comments()[k];
        const CommentFeatures& f = features[k];
        csv::write_row(out, {c.group_id, std::to_string(c.seq), c.participant_id,
                             std::to_string(f.comment_length_chars), std::to_string(f.word_count),
                             text::format_number(f.average_word_length),
                             std::to_string(f.choice_reference), std::to_string(f.all_caps_words),
                             std::to_string(f.time_reference), std::to_string(f.exclamation_points),
                             std::to_string(f.question_marks), std::to_string(f.self_references)});
    }
}

void write_aggregate_csv(std::ostream& out, const std::string& group_id,
                         std::span<const ParticipantAggregate> aggregates, bool header) {
    if (header)
        out << "group_id,participant_id,comment_count,comment_length_chars,word_count,"
               "average_word_length,choice_reference,all_caps_words,time_reference,"
               "exclamation_points,question_marks,self_references\n";
    for (const ParticipantAggregate& a : aggregates)
        csv::write_row(out, {group_id, a.participant_id, std::to_string(a.comment_count),
                             std::to_string(a.comment_length_chars), std::to_string(a.word_count),
                             text::format_number(a.average_word_length),
                             std::to_string(a.choice_reference), std::to_string(a.all_caps_words),
                             std::to_string(a.time_reference), std::to_string(a.exclamation_points),
                             std::to_string(a.question_marks), std::to_string(a.self_references)});
}

}  // namespace chatdom
