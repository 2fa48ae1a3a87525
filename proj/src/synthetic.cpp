#include "chatdom/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "chatdom/glm.hpp"

namespace chatdom::synth {

namespace {

const char* const kNames[] = {"alex", "Alex", "ALEX", "Nali", "nali", "John", "john", "Donahue", "Mansi", "Mr. Nali"};
const char* const kTime[] = {"only 10 mins left", "we have 5 minutes", "running out of time",
                             "hurry, time is almost up", "2 min left", "watch the clock"};
const char* const kSelf[] = {"I think", "my clue says", "I'm sure", "I don't know", "me too", "i've read mine"};
const char* const kFiller[] = {"ok",           "agreed",          "what about the logs", "the password was changed",
                               "good point",   "that makes sense", "who had access",     "the badge records",
                               "he was at the office", "hmm",      "wait",               "read the memo again",
                               "the server room", "makes no sense", "yeah",              "right"};
const char* const kCaps[] = {"IT HAS TO BE", "NO WAY", "LISTEN", "READ IT", "TRUST ME"};
const char* const kHumor[] = {"lol", "ha ha", "it was the gardener in the kitchen with the candle stick"};

template <std::size_t N>
const char* pick(Rng& rng, const char* const (&pool)[N]) {
    return pool[rng.below(static_cast<int>(N))];
}

std::string iso_time(std::int64_t seconds) {
    const std::int64_t h = 10 + seconds / 3600, m = (seconds / 60) % 60, s = seconds % 60;
    char buf[64];
    std::snprintf(buf, sizeof buf, "2024-03-05T%02lld:%02lld:%02lldZ", static_cast<long long>(h),
                  static_cast<long long>(m), static_cast<long long>(s));
    return buf;
}

}  // namespace

double Rng::normal() {
    // Box-Muller; u1 in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::string random_comment(Rng& rng, double assertiveness) {
    std::string out;
    auto add = [&](const std::string& s) {
        if (!out.empty()) out += ' ';
        out += s;
    };
    if (rng.bernoulli(0.15 + 0.25 * assertiveness)) add(pick(rng, kCaps));
    if (rng.bernoulli(0.25)) add(pick(rng, kSelf));
    const int fillers = 1 + rng.below(3);
    for (int k = 0; k < fillers; ++k) add(pick(rng, kFiller));
    if (rng.bernoulli(0.2 + 0.4 * assertiveness)) {
        add(pick(rng, kNames));
        if (rng.bernoulli(0.2)) add(std::string("or ") + pick(rng, kNames));
    }
    if (rng.bernoulli(0.05 + 0.08 * assertiveness)) add(pick(rng, kTime));
    if (rng.bernoulli(0.06)) add(pick(rng, kHumor));
    if (rng.bernoulli(0.22)) {
        out.append(static_cast<std::size_t>(1 + rng.below(3)), '?');
    } else if (rng.bernoulli(0.15 + 0.3 * assertiveness)) {
        out.append(static_cast<std::size_t>(1 + rng.below(4)), '!');
    } else if (rng.bernoulli(0.1)) {
        out += " :-)";
    }
    return out;
}

ManualCodes random_codes(Rng& rng, const std::string& text, const CommentFeatures& f) {
    ManualCodes m;
    const bool laughs = text.find("lol") != std::string::npos || text.find("ha ha") != std::string::npos;
    m.humor = text.find("gardener") != std::string::npos || rng.bernoulli(0.02);
    m.humor_appreciated = laughs ? 1 : rng.bernoulli(0.01);
    m.profanity = rng.bernoulli(0.03);
    m.questions = f.question_marks > 0 ? rng.bernoulli(0.9) : rng.bernoulli(0.05);
    m.answers = !m.questions && rng.bernoulli(0.12);
    m.call_for_vote = rng.bernoulli(0.05);
    m.organizational = rng.bernoulli(0.06);
    m.asymmetric_info = rng.bernoulli(0.04);
    m.refocus = rng.bernoulli(0.03);
    m.choice_reference_pro = f.choice_reference + (rng.bernoulli(0.15) ? 1 : 0);
    return m;
}

SyntheticCorpus make_corpus(const CorpusSpec& spec, const LexiconConfig& lexicon) {
    Rng rng(spec.seed);
    SyntheticCorpus out;
    out.annotations.columns = {"group_id", "seq", "choice_reference_pro", "ed_a", "ed_b", "resolved"};
    for (const auto& c : manual_flag_columns()) out.annotations.columns.insert(c);

    const auto& auto_cols = feature_column_names();
    const auto& manual_cols = manual_column_names();

    for (int g = 0; g < spec.groups; ++g) {
        const std::string group_id = "g" + std::to_string(g + 1);
        std::vector<double> assertiveness(static_cast<std::size_t>(spec.members));
        std::vector<double> talkativeness(static_cast<std::size_t>(spec.members));
        double talk_total = 0.0;
        for (int m = 0; m < spec.members; ++m) {
            assertiveness[m] = rng.uniform() < 0.2 ? 0.7 + 0.3 * rng.uniform() : 0.4 * rng.uniform();
            talkativeness[m] = 0.5 + rng.uniform() * (1.0 + 2.0 * assertiveness[m]);
            talk_total += talkativeness[m];
        }
        const int n_comments = spec.min_comments + rng.below(spec.max_comments - spec.min_comments + 1);

        std::vector<Comment> comments;
        std::int64_t clock = 0;
        for (int k = 0; k < n_comments; ++k) {
            // Every member speaks at least once.
            int who = k < spec.members ? k : 0;
            if (k >= spec.members) {
                double u = rng.uniform() * talk_total;
                while (who + 1 < spec.members && u >= talkativeness[who]) u -= talkativeness[who++];
            }
            Comment c;
            c.group_id = group_id;
            c.participant_id = "p" + std::to_string(who + 1);
            c.seq = static_cast<std::size_t>(k);
            c.offset_seconds = static_cast<double>(clock);
            c.timestamp = iso_time(clock);
            c.text = random_comment(rng, assertiveness[who]);
            clock += 2 + rng.below(20);

            const CommentFeatures f = extract_features(c, lexicon);
            const ManualCodes codes = random_codes(rng, c.text, f);
            const auto fv = feature_values(f);
            const auto mv = manual_values(codes);
            double eta = spec.intercept;
            for (std::size_t j = 0; j < auto_cols.size(); ++j)
                if (auto it = spec.effects.find(auto_cols[j]); it != spec.effects.end()) eta += it->second * fv[j];
            for (std::size_t j = 0; j < manual_cols.size(); ++j)
                if (auto it = spec.effects.find(manual_cols[j]); it != spec.effects.end()) eta += it->second * mv[j];
            const int truth = rng.bernoulli(glm::logistic(eta)) ? 1 : 0;

            Annotation a;
            a.codes = codes;
            a.ed.key = {group_id, c.seq};
            a.ed.coder_a = truth;
            a.ed.coder_b = rng.bernoulli(spec.coder_b_flip) ? 1 - truth : truth;
            if (a.ed.agrees() || spec.reconciled) a.ed.resolved = truth;
            out.annotations.entries.emplace(a.ed.key, std::move(a));
            out.truth.push_back(truth);
            comments.push_back(std::move(c));
        }
        out.transcripts.emplace_back(group_id, std::move(comments));
    }
    return out;
}

}  // namespace chatdom::synth
