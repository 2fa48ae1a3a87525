#include "chatdom/dominance.hpp"

#include <cmath>
#include <set>
#include <unordered_map>

#include "chatdom/csv.hpp"
#include "chatdom/error.hpp"
#include "chatdom/text.hpp"

namespace chatdom {

namespace {

double r6(double v) { return std::stod(text::format_number(v)); }

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + v[k];
    return out;
}

}  // namespace

std::vector<EDScore> score_comments(const glm::LogitModel& model, const PredictorTable& table,
                                    double decision_threshold) {
    if (!(decision_threshold >= 0.0 && decision_threshold <= 1.0))
        throw ConfigError("decision threshold must lie in [0, 1]");
    if (table.keys.size() != table.rows.size()) throw ConfigError("predictor keys and rows differ in length");

    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t k = 0; k < table.columns.size(); ++k) position[table.columns[k]] = k;

    std::vector<std::string> missing, extra;
    std::vector<std::size_t> source;  // table column for each model column after the intercept
    std::set<std::string> model_cols;
    for (std::size_t k = 1; k < model.names.size(); ++k) {
        model_cols.insert(model.names[k]);
        auto it = position.find(model.names[k]);
        if (it == position.end())
            missing.push_back(model.names[k]);
        else
            source.push_back(it->second);
    }
    for (const std::string& c : table.columns)
        if (!model_cols.contains(c)) extra.push_back(c);
    if (!missing.empty() || !extra.empty()) {
        std::string msg = "predictor columns do not match the model;";
        if (!missing.empty()) msg += " missing: " + join(missing) + ";";
        if (!extra.empty()) msg += " extra: " + join(extra) + ";";
        msg.pop_back();
        throw ModelError(msg);
    }

    std::vector<EDScore> out;
    out.reserve(table.rows.size());
    std::vector<double> ordered(source.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        if (row.size() != table.columns.size())
            throw ModelError("predictor row " + std::to_string(i) + " has the wrong number of values");
        for (std::size_t k = 0; k < source.size(); ++k) ordered[k] = row[source[k]];
        EDScore s;
        s.key = table.keys[i];
        s.probability = glm::predict_prob(model, ordered);
        s.predicted_ed = s.probability > decision_threshold ? 1 : 0;
        out.push_back(std::move(s));
    }
    return out;
}

std::size_t DominanceReport::dominant_count() const {
    std::size_t n = 0;
    for (const auto& p : participants) n += p.dominant;
    return n;
}

DominanceReport dominance_shares(std::span<const int> ed_labels, std::span<const Transcript> transcripts,
                                 SdKind sd_kind) {
    std::size_t total_comments = 0;
    for (const Transcript& t : transcripts) total_comments += t.size();
    if (ed_labels.size() != total_comments)
        throw ConfigError("ED labels (" + std::to_string(ed_labels.size()) + ") do not align with comments (" +
                          std::to_string(total_comments) + ")");

    DominanceReport r;
    r.sd_kind = sd_kind;
    std::size_t offset = 0;
    std::size_t groups_with_ed = 0;
    for (const Transcript& t : transcripts) {
        if (t.participants().empty()) throw ConfigError("group '" + t.group_id() + "' has no members");
        std::unordered_map<std::string, std::size_t> slot;
        const std::size_t first = r.participants.size();
        for (const std::string& pid : t.participants()) {
            slot[pid] = r.participants.size();
            r.participants.push_back({t.group_id(), pid});
        }
        int group_total = 0;
        for (const Comment& c : t.comments()) {
            const int label = ed_labels[offset++];
            if (label != 0 && label != 1) throw ConfigError("ED labels must be 0/1");
            r.participants[slot[c.participant_id]].ed_count += label;
            group_total += label;
        }
        if (group_total == 0)
            r.warnings.push_back("group '" + t.group_id() + "' has no ED comments; all shares are 0");
        else
            ++groups_with_ed;
        for (std::size_t k = first; k < r.participants.size(); ++k) {
            ParticipantShare& p = r.participants[k];
            p.group_ed_total = group_total;
            p.share = group_total ? double(p.ed_count) / double(group_total) : 0.0;
        }
    }

    // Shares in a group with ED comments sum to 1, so the pooled mean is
    // exactly (groups with ED) / participants.
    const double n = static_cast<double>(r.participants.size());
    r.mean_share = static_cast<double>(groups_with_ed) / n;
    double ss = 0.0;
    for (const auto& p : r.participants) ss += (p.share - r.mean_share) * (p.share - r.mean_share);
    if (sd_kind == SdKind::Population)
        r.sd_share = std::sqrt(ss / n);
    else
        r.sd_share = r.participants.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    r.threshold = r.mean_share + r.sd_share;
    for (auto& p : r.participants) p.dominant = p.share > r.threshold;
    return r;
}

ScoringEvaluation evaluate_scoring(std::span<const EDScore> predicted, const std::map<CommentKey, int>& reference) {
    ScoringEvaluation e;
    std::vector<std::string> unknown;
    for (const EDScore& s : predicted) {
        auto it = reference.find(s.key);
        if (it == reference.end()) {
            unknown.push_back(s.key.str());
            continue;
        }
        const bool truth = it->second != 0;
        const bool pred = s.predicted_ed != 0;
        if (truth && pred) ++e.true_positive;
        else if (!truth && pred) ++e.false_positive;
        else if (!truth && !pred) ++e.true_negative;
        else ++e.false_negative;
    }
    if (!unknown.empty()) throw ConfigError("scored keys missing from the reference labels: " + join(unknown));
    const std::size_t n = predicted.size();
    if (n == 0) throw ConfigError("nothing to evaluate");
    e.accuracy = double(e.true_positive + e.true_negative) / double(n);
    if (e.true_positive + e.false_positive)
        e.precision = double(e.true_positive) / double(e.true_positive + e.false_positive);
    if (e.true_positive + e.false_negative)
        e.recall = double(e.true_positive) / double(e.true_positive + e.false_negative);
    return e;
}

nlohmann::json to_json(const DominanceReport& r) {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : r.participants)
        parts.push_back({{"group_id", p.group_id},
                         {"participant_id", p.participant_id},
                         {"ed_count", p.ed_count},
                         {"group_ed_total", p.group_ed_total},
                         {"share", r6(p.share)},
                         {"dominant", p.dominant}});
    return {{"participants", parts},
            {"mean_share", r6(r.mean_share)},
            {"sd_share", r6(r.sd_share)},
            {"sd_kind", r.sd_kind == SdKind::Population ? "population" : "sample"},
            {"threshold", r6(r.threshold)},
            {"dominant_count", r.dominant_count()},
            {"warnings", r.warnings}};
}

nlohmann::json to_json(const ScoringEvaluation& e) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(r6(*v)) : nlohmann::json(nullptr); };
    return {{"true_positive", e.true_positive},   {"false_positive", e.false_positive},
            {"true_negative", e.true_negative},   {"false_negative", e.false_negative},
            {"accuracy", r6(e.accuracy)},         {"precision", opt(e.precision)},
            {"recall", opt(e.recall)}};
}

void write_dominance_csv(std::ostream& out, const DominanceReport& r) {
    out << "group_id,participant_id,ed_count,group_ed_total,share,threshold,dominant\n";
    for (const auto& p : r.participants)
        csv::write_row(out, {p.group_id, p.participant_id, std::to_string(p.ed_count),
                             std::to_string(p.group_ed_total), text::format_number(p.share),
                             text::format_number(r.threshold), p.dominant ? "1" : "0"});
}

void write_scores_csv(std::ostream& out, std::span<const EDScore> scores) {
    out << "group_id,seq,probability,predicted_ed\n";
    for (const auto& s : scores)
        csv::write_row(out, {s.key.group_id, std::to_string(s.key.seq), text::format_number(s.probability),
                             std::to_string(s.predicted_ed)});
}

}  // namespace chatdom
