#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "chatdom/annotations.hpp"
#include "chatdom/corpus.hpp"
#include "chatdom/glm.hpp"
#include "json.hpp"

namespace chatdom {

// Named predictor rows, one per comment.
struct PredictorTable {
    std::vector<std::string> columns;
    std::vector<CommentKey> keys;
    std::vector<std::vector<double>> rows;
};

struct EDScore {
    CommentKey key;
    double probability = 0.0;
    int predicted_ed = 0;  // 1 iff probability > decision threshold
};

// Table columns must equal the model's non-intercept columns as a set;
// otherwise ModelError naming the missing and extra ones. The threshold
// must lie in [0, 1] (ConfigError).
std::vector<EDScore> score_comments(const glm::LogitModel& model, const PredictorTable& table,
                                    double decision_threshold = 0.5);

enum class SdKind { Population, Sample };

struct ParticipantShare {
    std::string group_id;
    std::string participant_id;
    int ed_count = 0;
    int group_ed_total = 0;
    double share = 0.0;
    bool dominant = false;
};

struct DominanceReport {
    std::vector<ParticipantShare> participants;
    double mean_share = 0.0;
    double sd_share = 0.0;
    double threshold = 0.0;  // mean + 1 sd
    SdKind sd_kind = SdKind::Population;
    std::vector<std::string> warnings;

    std::size_t dominant_count() const;
};

// Each participant's share of their group's ED comments, pooled mean and
// SD over every participant of every group, and strict mean + SD
// dominance flags. Labels align with the comments of the transcripts
// taken in order (ConfigError otherwise). Groups without ED comments
// give every member a share of 0 and a warning.
DominanceReport dominance_shares(std::span<const int> ed_labels, std::span<const Transcript> transcripts,
                                 SdKind sd_kind = SdKind::Population);

struct ScoringEvaluation {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t true_negative = 0;
    std::size_t false_negative = 0;
    double accuracy = 0.0;
    std::optional<double> precision;  // absent when nothing was predicted positive
    std::optional<double> recall;     // absent when the reference has no positives
};

// Every scored key must appear in the reference (ConfigError listing the
// ones that do not).
ScoringEvaluation evaluate_scoring(std::span<const EDScore> predicted, const std::map<CommentKey, int>& reference);

nlohmann::json to_json(const DominanceReport& r);
nlohmann::json to_json(const ScoringEvaluation& e);
void write_dominance_csv(std::ostream& out, const DominanceReport& r);
void write_scores_csv(std::ostream& out, std::span<const EDScore> scores);

}  // namespace chatdom
