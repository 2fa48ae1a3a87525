#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace chatdom {

// One chat utterance. timestamp holds the source string verbatim;
// offset_seconds is that instant relative to the transcript's first
// comment.
struct Comment {
    std::string group_id;
    std::string participant_id;
    std::string timestamp;
    double offset_seconds = 0.0;
    std::size_t seq = 0;
    std::string text;

    bool operator==(const Comment&) const = default;
};

// Comments of one group in source order. Construction checks that every
// comment belongs to the group and that seq runs 0, 1, 2, ...
class Transcript {
public:
    Transcript(std::string group_id, std::vector<Comment> comments);

    const std::string& group_id() const { return group_id_; }
    const std::vector<Comment>& comments() const { return comments_; }
    // Distinct participant ids in order of first appearance.
    const std::vector<std::string>& participants() const { return participants_; }
    std::size_t size() const { return comments_.size(); }

    bool operator==(const Transcript&) const = default;

private:
    std::string group_id_;
    std::vector<Comment> comments_;
    std::vector<std::string> participants_;
};

enum class TranscriptFormat { Csv };

struct ParseResult {
    Transcript transcript;
    std::vector<std::string> warnings;
};

// CSV with header group_id,participant_id,timestamp,text (any column
// order, extra columns ignored). One group per source. Timestamps are
// ISO-8601 datetimes or non-negative second offsets, not mixed.
// Throws EmptyTranscriptError when there are no data rows and ParseError
// (with line) on malformed rows. A timestamp that goes backwards is a
// warning; the comment keeps its file position.
ParseResult parse_transcript(std::istream& source, TranscriptFormat format = TranscriptFormat::Csv);
ParseResult parse_transcript(std::string_view source, TranscriptFormat format = TranscriptFormat::Csv);

// Parses one timestamp to seconds (since the Unix epoch for ISO-8601,
// as-is for offsets). Returns false when the string is neither form.
bool parse_timestamp(std::string_view s, double& seconds, bool& is_iso);

void write_transcript_csv(std::ostream& out, const Transcript& t);

struct FieldSummary {
    std::int64_t total = 0;
    double mean = 0.0;
    double sd = 0.0;         // sample (n-1) standard deviation
    bool sd_defined = false; // false with a single group; sd is then 0
    std::int64_t min = 0;
    std::int64_t max = 0;
};

struct GroupStats {
    std::string group_id;
    std::int64_t comment_count = 0;
    std::int64_t char_length_total = 0;
    std::int64_t word_count_total = 0;
};

struct CorpusStats {
    std::vector<GroupStats> groups;
    FieldSummary comments;
    FieldSummary length;
    FieldSummary words;
};

// Requires at least one transcript (throws ConfigError otherwise).
CorpusStats corpus_stats(std::span<const Transcript> transcripts);

FieldSummary summarize(std::span<const std::int64_t> values);

nlohmann::json to_json(const Transcript& t);
nlohmann::json to_json(const CorpusStats& s);

}  // namespace chatdom
