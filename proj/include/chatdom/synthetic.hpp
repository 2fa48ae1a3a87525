#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "chatdom/annotations.hpp"
#include "chatdom/corpus.hpp"
#include "chatdom/features.hpp"

// Deterministic synthetic chat corpora for tests, the acceptance suite and
// the bundled demo data. Only the mt19937_64 bit stream is used (no
// std distributions), so output is identical across standard libraries.
namespace chatdom::synth {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    int below(int n) { return static_cast<int>(uniform() * n); }
    bool bernoulli(double p) { return uniform() < p; }
    double normal();

private:
    std::mt19937_64 engine_;
};

// One chat line. Higher `assertiveness` (0..1) raises the rate of suspect
// names, capitals, exclamations and time pressure.
std::string random_comment(Rng& rng, double assertiveness);

struct CorpusSpec {
    int groups = 7;
    int members = 6;
    int min_comments = 100;
    int max_comments = 390;
    std::uint64_t seed = 20240101;
    // ED = Bernoulli(logistic(intercept + sum effect * column)). Keys are
    // regression column names from the feature and manual tables.
    double intercept = -2.5;
    std::map<std::string, double> effects = {
        {"ChoiceReference", 1.2}, {"TimeReferences", 2.0}, {"AllCapsWords", 0.25},
        {"CountExclamationPoints", 0.2}, {"CountQuestionMarks", -0.6}, {"SelfReferences", 0.2},
        {"CallForVote", 1.5},     {"Organizational", 1.2}, {"Questions", -0.8}};
    double coder_b_flip = 0.05;  // probability coder B disagrees with the truth
    bool reconciled = true;      // fill `resolved` for every disagreement
};

struct SyntheticCorpus {
    std::vector<Transcript> transcripts;
    AnnotationSet annotations;
    std::vector<int> truth;  // ED per comment, transcripts in order
};

SyntheticCorpus make_corpus(const CorpusSpec& spec, const LexiconConfig& lexicon = LexiconConfig::defaults());

// Manual codes consistent with the text (questions for '?', humour
// appreciation for "lol", pronoun-inclusive choice counts, ...).
ManualCodes random_codes(Rng& rng, const std::string& text, const CommentFeatures& f);

}  // namespace chatdom::synth
