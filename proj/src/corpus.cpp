#include "chatdom/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "chatdom/csv.hpp"
#include "chatdom/error.hpp"
#include "chatdom/text.hpp"

namespace chatdom {

namespace {

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool read_digits(std::string_view s, std::size_t& pos, std::size_t count, int& out) {
    if (pos + count > s.size()) return false;
    out = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const char c = s[pos + k];
        if (c < '0' || c > '9') return false;
        out = out * 10 + (c - '0');
    }
    pos += count;
    return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
    if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
    }
    return false;
}

bool parse_iso(std::string_view s, double& seconds) {
    std::size_t p = 0;
    int y, mo, d, h, mi, sec;
    if (!read_digits(s, p, 4, y) || !expect(s, p, '-') || !read_digits(s, p, 2, mo) ||
        !expect(s, p, '-') || !read_digits(s, p, 2, d))
        return false;
    if (p >= s.size() || (s[p] != 'T' && s[p] != ' ')) return false;
    ++p;
    if (!read_digits(s, p, 2, h) || !expect(s, p, ':') || !read_digits(s, p, 2, mi) ||
        !expect(s, p, ':') || !read_digits(s, p, 2, sec))
        return false;
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60) return false;

    double frac = 0.0;
    if (p < s.size() && (s[p] == '.' || s[p] == ',')) {
        ++p;
        double scale = 0.1;
        const std::size_t start = p;
        while (p < s.size() && s[p] >= '0' && s[p] <= '9') {
            frac += (s[p] - '0') * scale;
            scale /= 10.0;
            ++p;
        }
        if (p == start) return false;
    }

    int offset_minutes = 0;
    if (p < s.size()) {
        if (s[p] == 'Z') {
            ++p;
        } else if (s[p] == '+' || s[p] == '-') {
            const int sign = s[p] == '-' ? -1 : 1;
            ++p;
            int oh, om;
            if (!read_digits(s, p, 2, oh)) return false;
            expect(s, p, ':');
            if (!read_digits(s, p, 2, om)) return false;
            offset_minutes = sign * (oh * 60 + om);
        } else {
            return false;
        }
    }
    if (p != s.size()) return false;

    const std::int64_t days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
    seconds = static_cast<double>(days * 86400 + h * 3600 + mi * 60 + sec - offset_minutes * 60) + frac;
    return true;
}

bool parse_offset(std::string_view s, double& seconds) {
    if (s.empty()) return false;
    bool seen_dot = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const char c = s[k];
        if (c == '.') {
            if (seen_dot || k == 0 || k + 1 == s.size()) return false;
            seen_dot = true;
        } else if (c < '0' || c > '9') {
            return false;
        }
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seconds);
    return ec == std::errc() && ptr == s.data() + s.size();
}

nlohmann::json summary_json(const FieldSummary& f) {
    return {{"total", f.total},
            {"mean", f.mean},
            {"sd", f.sd},
            {"sd_defined", f.sd_defined},
            {"min", f.min},
            {"max", f.max}};
}

double round6(double v) { return std::stod(text::format_number(v)); }

}  // namespace

Transcript::Transcript(std::string group_id, std::vector<Comment> comments)
    : group_id_(std::move(group_id)), comments_(std::move(comments)) {
    std::unordered_set<std::string> seen;
    for (std::size_t k = 0; k < comments_.size(); ++k) {
        const Comment& c = comments_[k];
        if (c.group_id != group_id_)
            throw ParseError("comment " + std::to_string(k) + " belongs to group '" + c.group_id +
                             "', expected '" + group_id_ + "'");
        if (c.seq != k)
            throw ParseError("comment seq " + std::to_string(c.seq) + " at position " +
                             std::to_string(k) + " breaks the 0-based sequence");
        if (seen.insert(c.participant_id).second) participants_.push_back(c.participant_id);
    }
}

bool parse_timestamp(std::string_view s, double& seconds, bool& is_iso) {
    if (parse_iso(s, seconds)) {
        is_iso = true;
        return true;
    }
    if (parse_offset(s, seconds)) {
        is_iso = false;
        return true;
    }
    return false;
}

ParseResult parse_transcript(std::istream& source, TranscriptFormat format) {
    std::string data{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
    return parse_transcript(std::string_view(data), format);
}

ParseResult parse_transcript(std::string_view source, TranscriptFormat /*format*/) {
    if (!text::is_valid_utf8(source)) throw ParseError("source is not valid UTF-8");

    const auto records = csv::read_all(source);
    if (records.empty()) throw EmptyTranscriptError();

    const csv::Header header(records.front());
    const std::size_t i_group = header.index("group_id");
    const std::size_t i_part = header.index("participant_id");
    const std::size_t i_time = header.index("timestamp");
    const std::size_t i_text = header.index("text");
    const std::size_t width = std::max({i_group, i_part, i_time, i_text}) + 1;

    if (records.size() == 1) throw EmptyTranscriptError();

    std::vector<Comment> comments;
    std::vector<std::string> warnings;
    comments.reserve(records.size() - 1);
    double first_seconds = 0.0, prev_seconds = 0.0;
    bool first_is_iso = false;

    for (std::size_t r = 1; r < records.size(); ++r) {
        const csv::Record& rec = records[r];
        if (rec.fields.size() < width)
            throw ParseError("malformed record: expected at least " + std::to_string(width) +
                                 " fields, found " + std::to_string(rec.fields.size()),
                             rec.line);
        Comment c;
        c.group_id = rec.fields[i_group];
        c.participant_id = rec.fields[i_part];
        c.timestamp = rec.fields[i_time];
        c.text = rec.fields[i_text];
        c.seq = comments.size();
        if (c.group_id.empty()) throw ParseError("malformed record: missing group_id", rec.line);
        if (c.participant_id.empty())
            throw ParseError("malformed record: missing participant_id", rec.line);
        if (c.timestamp.empty()) throw ParseError("malformed record: missing timestamp", rec.line);

        double secs = 0.0;
        bool is_iso = false;
        if (!parse_timestamp(c.timestamp, secs, is_iso))
            throw ParseError("unrecognized timestamp '" + c.timestamp + "'", rec.line);
        if (comments.empty()) {
            first_seconds = secs;
            first_is_iso = is_iso;
        } else {
            if (is_iso != first_is_iso)
                throw ParseError("timestamp format differs from the first row", rec.line);
            if (c.group_id != comments.front().group_id)
                throw ParseError("group_id '" + c.group_id + "' differs from '" +
                                     comments.front().group_id + "'; one group per transcript",
                                 rec.line);
            if (secs < prev_seconds)
                warnings.push_back("line " + std::to_string(rec.line) + ": timestamp '" +
                                   c.timestamp + "' is earlier than the previous comment");
        }
        prev_seconds = secs;
        c.offset_seconds = secs - first_seconds;
        comments.push_back(std::move(c));
    }

    std::string group = comments.front().group_id;
    return {Transcript(std::move(group), std::move(comments)), std::move(warnings)};
}

void write_transcript_csv(std::ostream& out, const Transcript& t) {
    out << "group_id,participant_id,timestamp,text\n";
    for (const Comment& c : t.comments())
        out << csv::escape(c.group_id) << ',' << csv::escape(c.participant_id) << ','
            << csv::escape(c.timestamp) << ',' << csv::quote(c.text) << '\n';
}

FieldSummary summarize(std::span<const std::int64_t> values) {
    FieldSummary f;
    if (values.empty()) return f;
    f.total = std::accumulate(values.begin(), values.end(), std::int64_t{0});
    f.min = *std::min_element(values.begin(), values.end());
    f.max = *std::max_element(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    f.mean = static_cast<double>(f.total) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (auto v : values) ss += (static_cast<double>(v) - f.mean) * (static_cast<double>(v) - f.mean);
        f.sd = std::sqrt(ss / (n - 1.0));
        f.sd_defined = true;
    }
    return f;
}

CorpusStats corpus_stats(std::span<const Transcript> transcripts) {
    if (transcripts.empty()) throw ConfigError("corpus statistics need at least one transcript");

    CorpusStats stats;
    std::vector<std::int64_t> counts, lengths, words;
    for (const Transcript& t : transcripts) {
        GroupStats g;
        g.group_id = t.group_id();
        for (const Comment& c : t.comments()) {
            ++g.comment_count;
            g.char_length_total += static_cast<std::int64_t>(text::scalar_count(c.text));
            g.word_count_total += static_cast<std::int64_t>(text::tokenize(c.text).size());
        }
        counts.push_back(g.comment_count);
        lengths.push_back(g.char_length_total);
        words.push_back(g.word_count_total);
        stats.groups.push_back(std::move(g));
    }
    stats.comments = summarize(counts);
    stats.length = summarize(lengths);
    stats.words = summarize(words);
    return stats;
}

nlohmann::json to_json(const Transcript& t) {
    nlohmann::json comments = nlohmann::json::array();
    for (const Comment& c : t.comments())
        comments.push_back({{"seq", c.seq},
                            {"participant_id", c.participant_id},
                            {"timestamp", c.timestamp},
                            {"offset_seconds", round6(c.offset_seconds)},
                            {"text", c.text}});
    return {{"group_id", t.group_id()}, {"participants", t.participants()}, {"comments", comments}};
}

nlohmann::json to_json(const CorpusStats& s) {
    nlohmann::json groups = nlohmann::json::array();
    for (const GroupStats& g : s.groups)
        groups.push_back({{"group_id", g.group_id},
                          {"comment_count", g.comment_count},
                          {"char_length_total", g.char_length_total},
                          {"word_count_total", g.word_count_total}});
    auto rounded = [](FieldSummary f) {
        f.mean = round6(f.mean);
        f.sd = round6(f.sd);
        return summary_json(f);
    };
    return {{"groups", groups},
            {"corpus",
             {{"group_count", s.groups.size()},
              {"comments", rounded(s.comments)},
              {"length", rounded(s.length)},
              {"words", rounded(s.words)}}}};
}

}  // namespace chatdom
