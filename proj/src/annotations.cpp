#include "chatdom/annotations.hpp"

#include <algorithm>
#include <charconv>

#include "chatdom/csv.hpp"
#include "chatdom/error.hpp"
#include "chatdom/text.hpp"

namespace chatdom {

namespace {

const std::vector<std::string> kFlagColumns = {
    "humor",         "humor_appreciated", "profanity",       "questions", "answers",
    "call_for_vote", "organizational",    "asymmetric_info", "refocus"};

int* flag_field(ManualCodes& m, std::size_t i) {
    int* fields[] = {&m.humor,         &m.humor_appreciated, &m.profanity,       &m.questions, &m.answers,
                     &m.call_for_vote, &m.organizational,    &m.asymmetric_info, &m.refocus};
    return fields[i];
}

bool parse_int(const std::string& s, long& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

int parse_binary(const std::string& s, const std::string& column, std::size_t line) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw ParseError("column '" + column + "' must be 0 or 1, found '" + s + "'", line);
}

std::size_t parse_seq(const std::string& s, std::size_t line) {
    long v = 0;
    if (!parse_int(s, v) || v < 0) throw ParseError("seq must be a non-negative integer, found '" + s + "'", line);
    return static_cast<std::size_t>(v);
}

std::string join_keys(const std::vector<CommentKey>& keys) {
    std::string out;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        if (k) out += ", ";
        out += keys[k].str();
    }
    return out;
}

}  // namespace

const std::vector<std::string>& manual_flag_columns() { return kFlagColumns; }

const std::vector<std::string>& manual_column_names() {
    static const std::vector<std::string> names = {
        "Humor",       "HumorAppreciated", "Profanity",      "Answers", "Questions",
        "CallForVote", "Organizational",   "AsymmetricInfo", "Refocus", "ChoiceReferencePro"};
    return names;
}

std::vector<double> manual_values(const ManualCodes& m) {
    return {double(m.humor),         double(m.humor_appreciated), double(m.profanity),
            double(m.answers),       double(m.questions),         double(m.call_for_vote),
            double(m.organizational), double(m.asymmetric_info),  double(m.refocus),
            double(m.choice_reference_pro)};
}

int manual_flag(const ManualCodes& m, std::size_t flag_index) {
    ManualCodes copy = m;
    return *flag_field(copy, flag_index);
}

std::optional<int> EDLabelSet::final_value() const {
    if (agrees()) return coder_a;
    return resolved;
}

bool AnnotationSet::has_manual_codes() const {
    if (columns.contains("choice_reference_pro")) return true;
    return std::any_of(kFlagColumns.begin(), kFlagColumns.end(),
                       [&](const std::string& c) { return columns.contains(c); });
}

std::vector<EDLabelSet> AnnotationSet::labels() const {
    std::vector<EDLabelSet> out;
    out.reserve(entries.size());
    for (const auto& [key, a] : entries) out.push_back(a.ed);
    return out;
}

std::vector<std::string> AnnotationSet::warnings() const {
    std::vector<std::string> out;
    for (const auto& [field, n] : defaulted)
        if (n) out.push_back("field '" + field + "' defaulted to 0 for " + std::to_string(n) + " comment(s)");
    return out;
}

AnnotationSet load_annotations(std::istream& source, std::span<const Transcript> transcripts) {
    AnnotationSet set;
    for (const Transcript& t : transcripts)
        for (const Comment& c : t.comments()) {
            Annotation a;
            a.ed.key = {c.group_id, c.seq};
            a.ed.resolved = 0;
            set.entries.emplace(a.ed.key, std::move(a));
        }

    std::vector<std::string> counted = kFlagColumns;
    counted.insert(counted.end(), {"choice_reference_pro", "ed_a", "ed_b"});

    const auto records = csv::read_all(source);
    std::set<CommentKey> seen;
    std::vector<CommentKey> unknown;

    if (!records.empty()) {
        const csv::Header header(records.front());
        const std::size_t i_group = header.index("group_id");
        const std::size_t i_seq = header.index("seq");
        set.columns.insert(header.names().begin(), header.names().end());

        auto cell = [&](const csv::Record& r, const std::string& col) -> std::optional<std::string> {
            if (!header.has(col)) return std::nullopt;
            const std::size_t i = header.index(col);
            if (i >= r.fields.size() || r.fields[i].empty()) return std::nullopt;
            return r.fields[i];
        };

        for (std::size_t r = 1; r < records.size(); ++r) {
            const csv::Record& rec = records[r];
            if (rec.fields.size() <= std::max(i_group, i_seq))
                throw ParseError("malformed record: missing group_id or seq", rec.line);
            const CommentKey key{rec.fields[i_group], parse_seq(rec.fields[i_seq], rec.line)};
            if (!seen.insert(key).second) throw ParseError("duplicate annotation for " + key.str(), rec.line);
            auto it = set.entries.find(key);
            if (it == set.entries.end()) {
                unknown.push_back(key);
                continue;
            }
            Annotation& a = it->second;

            for (std::size_t f = 0; f < kFlagColumns.size(); ++f) {
                const std::string& col = kFlagColumns[f];
                if (auto v = cell(rec, col))
                    *flag_field(a.codes, f) = parse_binary(*v, col, rec.line);
                else
                    ++set.defaulted[col];
                if (auto v = cell(rec, col + "_b")) a.second_coder[col] = parse_binary(*v, col + "_b", rec.line);
            }
            if (auto v = cell(rec, "choice_reference_pro")) {
                long n = 0;
                if (!parse_int(*v, n) || n < 0)
                    throw ParseError("column 'choice_reference_pro' must be a non-negative integer, found '" +
                                         *v + "'",
                                     rec.line);
                a.codes.choice_reference_pro = static_cast<int>(n);
            } else {
                ++set.defaulted["choice_reference_pro"];
            }

            if (auto v = cell(rec, "ed_a")) a.ed.coder_a = parse_binary(*v, "ed_a", rec.line);
            else ++set.defaulted["ed_a"];
            if (auto v = cell(rec, "ed_b")) a.ed.coder_b = parse_binary(*v, "ed_b", rec.line);
            else ++set.defaulted["ed_b"];

            a.ed.resolved.reset();
            if (auto v = cell(rec, "resolved")) a.ed.resolved = parse_binary(*v, "resolved", rec.line);
            if (a.ed.agrees()) {
                if (a.ed.resolved && *a.ed.resolved != a.ed.coder_a)
                    throw ParseError("resolved value contradicts the agreed label for " + key.str(), rec.line);
                a.ed.resolved = a.ed.coder_a;
            }
        }
    }

    if (!unknown.empty())
        throw ConfigError("annotation keys not present in any transcript: " + join_keys(unknown));

    const std::size_t missing_rows = set.entries.size() - seen.size();
    if (missing_rows)
        for (const std::string& f : counted) set.defaulted[f] += missing_rows;
    return set;
}

void write_annotations_csv(std::ostream& out, const AnnotationSet& set) {
    std::vector<std::string> header = {"group_id", "seq"};
    header.insert(header.end(), kFlagColumns.begin(), kFlagColumns.end());
    header.insert(header.end(), {"choice_reference_pro", "ed_a", "ed_b", "resolved"});
    std::vector<std::string> second;
    for (const std::string& f : kFlagColumns)
        if (set.columns.contains(f + "_b")) second.push_back(f);
    for (const std::string& f : second) header.push_back(f + "_b");
    csv::write_row(out, header);

    for (const auto& [key, a] : set.entries) {
        std::vector<std::string> row = {key.group_id, std::to_string(key.seq)};
        for (std::size_t f = 0; f < kFlagColumns.size(); ++f)
            row.push_back(std::to_string(manual_flag(a.codes, f)));
        row.push_back(std::to_string(a.codes.choice_reference_pro));
        row.push_back(std::to_string(a.ed.coder_a));
        row.push_back(std::to_string(a.ed.coder_b));
        row.push_back(a.ed.resolved ? std::to_string(*a.ed.resolved) : "");
        for (const std::string& f : second) {
            auto it = a.second_coder.find(f);
            row.push_back(it == a.second_coder.end() ? "" : std::to_string(it->second));
        }
        csv::write_row(out, row);
    }
}

ReliabilityReport reliability(const std::string& column, std::span<const int> coder_a,
                              std::span<const int> coder_b) {
    if (coder_a.empty()) throw ConfigError("reliability needs at least one item");
    if (coder_a.size() != coder_b.size()) throw ConfigError("coder label vectors differ in length");

    ReliabilityReport r;
    r.column = column;
    r.n_items = coder_a.size();
    for (std::size_t k = 0; k < coder_a.size(); ++k) ++r.confusion[coder_a[k] != 0][coder_b[k] != 0];

    const double n = static_cast<double>(r.n_items);
    const double a1 = double(r.confusion[1][0] + r.confusion[1][1]) / n;
    const double b1 = double(r.confusion[0][1] + r.confusion[1][1]) / n;
    r.percent_agreement = double(r.confusion[0][0] + r.confusion[1][1]) / n;
    r.kappa.po = r.percent_agreement;
    r.kappa.pe = a1 * b1 + (1.0 - a1) * (1.0 - b1);
    if (r.kappa.pe < 1.0) r.kappa.kappa = (r.kappa.po - r.kappa.pe) / (1.0 - r.kappa.pe);
    return r;
}

namespace {

ReliabilityReport ed_reliability(std::span<const EDLabelSet> labels) {
    std::vector<int> a, b;
    a.reserve(labels.size());
    b.reserve(labels.size());
    for (const EDLabelSet& l : labels) {
        a.push_back(l.coder_a);
        b.push_back(l.coder_b);
    }
    return reliability("ed", a, b);
}

}  // namespace

double percent_agreement(std::span<const EDLabelSet> labels) {
    return ed_reliability(labels).percent_agreement;
}

KappaResult cohens_kappa(std::span<const EDLabelSet> labels) { return ed_reliability(labels).kappa; }

std::vector<ReliabilityReport> reliability_by_column(const AnnotationSet& set) {
    if (!set.has_both_coders()) throw ConfigError("reliability needs both ed_a and ed_b columns");
    std::vector<ReliabilityReport> out;
    out.push_back(ed_reliability(set.labels()));
    for (std::size_t f = 0; f < kFlagColumns.size(); ++f) {
        const std::string& col = kFlagColumns[f];
        if (!set.columns.contains(col) || !set.columns.contains(col + "_b")) continue;
        std::vector<int> a, b;
        for (const auto& [key, ann] : set.entries) {
            auto it = ann.second_coder.find(col);
            if (it == ann.second_coder.end()) continue;
            a.push_back(manual_flag(ann.codes, f));
            b.push_back(it->second);
        }
        if (!a.empty()) out.push_back(reliability(col, a, b));
    }
    return out;
}

nlohmann::json to_json(const ReliabilityReport& r) {
    auto r6 = [](double v) { return std::stod(text::format_number(v)); };
    nlohmann::json j = {{"column", r.column},
                        {"n_items", r.n_items},
                        {"percent_agreement", r6(r.percent_agreement)},
                        {"po", r6(r.kappa.po)},
                        {"pe", r6(r.kappa.pe)},
                        {"kappa_defined", r.kappa.kappa.has_value()},
                        {"confusion",
                         {{"a0_b0", r.confusion[0][0]},
                          {"a0_b1", r.confusion[0][1]},
                          {"a1_b0", r.confusion[1][0]},
                          {"a1_b1", r.confusion[1][1]}}}};
    j["cohens_kappa"] = r.kappa.kappa ? nlohmann::json(r6(*r.kappa.kappa)) : nlohmann::json(nullptr);
    return j;
}

std::vector<EDLabelSet> reconcile(std::span<const EDLabelSet> labels,
                                  const std::map<CommentKey, int>& resolutions) {
    std::map<CommentKey, const EDLabelSet*> by_key;
    for (const EDLabelSet& l : labels) by_key[l.key] = &l;

    std::vector<CommentKey> extraneous, agreed, missing;
    for (const auto& [key, value] : resolutions) {
        auto it = by_key.find(key);
        if (it == by_key.end())
            extraneous.push_back(key);
        else if (it->second->agrees())
            agreed.push_back(key);
        if (value != 0 && value != 1)
            throw ConfigError("resolution for " + key.str() + " must be 0 or 1");
    }
    for (const EDLabelSet& l : labels)
        if (l.unresolved() && !resolutions.contains(l.key)) missing.push_back(l.key);

    if (!extraneous.empty() || !agreed.empty() || !missing.empty()) {
        std::string msg = "resolutions must cover exactly the disagreeing keys;";
        if (!missing.empty()) msg += " missing: " + join_keys(missing) + ";";
        if (!agreed.empty()) msg += " coders already agree on: " + join_keys(agreed) + ";";
        if (!extraneous.empty()) msg += " unknown keys: " + join_keys(extraneous) + ";";
        msg.pop_back();
        throw ConfigError(msg);
    }

    std::vector<EDLabelSet> out(labels.begin(), labels.end());
    for (EDLabelSet& l : out) {
        if (l.agrees())
            l.resolved = l.coder_a;
        else if (auto it = resolutions.find(l.key); it != resolutions.end())
            l.resolved = it->second;
    }
    return out;
}

std::map<CommentKey, int> load_resolutions(std::istream& source) {
    const auto records = csv::read_all(source);
    std::map<CommentKey, int> out;
    if (records.empty()) return out;
    const csv::Header header(records.front());
    const std::size_t i_group = header.index("group_id");
    const std::size_t i_seq = header.index("seq");
    const std::size_t i_res = header.index("resolved");
    for (std::size_t r = 1; r < records.size(); ++r) {
        const csv::Record& rec = records[r];
        if (rec.fields.size() <= std::max({i_group, i_seq, i_res}))
            throw ParseError("malformed resolution record", rec.line);
        CommentKey key{rec.fields[i_group], parse_seq(rec.fields[i_seq], rec.line)};
        const int v = parse_binary(rec.fields[i_res], "resolved", rec.line);
        if (!out.emplace(key, v).second) throw ParseError("duplicate resolution for " + key.str(), rec.line);
    }
    return out;
}

std::vector<int> final_labels(std::span<const EDLabelSet> labels, bool fallback_to_coder_a) {
    std::vector<int> out;
    std::vector<CommentKey> unresolved;
    out.reserve(labels.size());
    for (const EDLabelSet& l : labels) {
        if (auto v = l.final_value()) {
            out.push_back(*v);
        } else if (fallback_to_coder_a) {
            out.push_back(l.coder_a);
        } else {
            unresolved.push_back(l.key);
            out.push_back(0);
        }
    }
    if (!unresolved.empty())
        throw ModelError(std::to_string(unresolved.size()) +
                         " ED label(s) are unresolved (run `reconcile` first, or allow the coder A "
                         "fallback): " + join_keys(unresolved));
    return out;
}

}  // namespace chatdom
