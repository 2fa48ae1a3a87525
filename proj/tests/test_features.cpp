#include "doctest.h"

#include <cctype>
#include <sstream>

#include "chatdom/error.hpp"
#include "chatdom/features.hpp"
#include "chatdom/synthetic.hpp"

using namespace chatdom;

namespace {
const LexiconConfig kLex = LexiconConfig::defaults();
}

TEST_CASE("indicator examples") {
    CHECK(count_all_caps("IT HAS TO BE ALEX", kLex) == 5);
    CHECK(count_time_references("only 10 mins left", kLex) == 1);
    CHECK(count_exclamations("good point #5!!!") == 3);
    CHECK(count_question_marks("why Nali??") == 2);
    CHECK(count_self_references("I don't know", kLex) == 1);
    CHECK(count_choice_references("so it is John or Nali???", kLex) == 2);
}

TEST_CASE("count_all_caps") {
    CHECK(count_all_caps("ok", kLex) == 0);
    CHECK(count_all_caps("I SAID no", kLex) == 1);
    LexiconConfig one = kLex;
    one.min_allcaps_len = 1;
    CHECK(count_all_caps("I SAID no", one) == 2);
    CHECK(count_all_caps("ALEX!!! I'M SURE", kLex) == 2);  // apostrophe is not alphabetic
}

TEST_CASE("time reference is a per-comment indicator") {
    CHECK(count_time_references("alex did it", kLex) == 0);
    CHECK(count_time_references("hurry we have 2 minutes, TWO MINUTES", kLex) == 1);
}

TEST_CASE("character counters scan raw text") {
    CHECK(count_exclamations("no exclamation") == 0);
    CHECK(count_exclamations("wow! really!") == 2);
    CHECK(count_question_marks("statement.") == 0);
    CHECK(count_question_marks("so it is John or Nali???") == 3);
}

TEST_CASE("self and choice references") {
    CHECK(count_self_references("you did it", kLex) == 0);
    CHECK(count_self_references("I think my answer beats me", kLex) == 3);
    CHECK(count_self_references("I\xE2\x80\x99m sure", kLex) == 1);
    CHECK(count_choice_references("nobody is named here", kLex) == 0);
    CHECK(count_choice_references("ALEX alex Alex", kLex) == 3);
    CHECK(count_choice_references("Johnson is not john", kLex) == 1);
}

TEST_CASE("empty choice lexicon is a configuration error") {
    LexiconConfig cfg = kLex;
    cfg.choice_terms.clear();
    CHECK_THROWS_AS(count_choice_references("alex", cfg), ConfigError);
    CHECK_THROWS_AS(extract_features(std::string_view("alex"), cfg), ConfigError);
}

TEST_CASE("extract_features on the indicator examples") {
    const CommentFeatures why = extract_features(std::string_view("why Nali??"), kLex);
    CHECK(why.comment_length_chars == 10);
    CHECK(why.word_count == 2);
    CHECK(why.average_word_length == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(why.choice_reference == 1);
    CHECK(why.all_caps_words == 0);
    CHECK(why.time_reference == 0);
    CHECK(why.exclamation_points == 0);
    CHECK(why.question_marks == 2);
    CHECK(why.self_references == 0);

    const CommentFeatures caps = extract_features(std::string_view("IT HAS TO BE ALEX"), kLex);
    CHECK(caps.all_caps_words == 5);
    CHECK(caps.choice_reference == 1);
    CHECK(caps.question_marks == 0);
    CHECK(caps.exclamation_points == 0);
    CHECK(caps.time_reference == 0);
    CHECK(caps.self_references == 0);
    CHECK(caps.word_count == 5);

    CHECK(extract_features(std::string_view(""), kLex) == CommentFeatures{});
}

TEST_CASE("emoticons count toward length but not words") {
    const auto f = extract_features(std::string_view("ok :-)"), kLex);
    CHECK(f.comment_length_chars == 6);
    CHECK(f.word_count == 1);
    CHECK(f.average_word_length == 2.0);
}

TEST_CASE("lexicon validation and loading") {
    LexiconConfig bad = kLex;
    bad.choice_terms.insert("Alex");
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = kLex;
    bad.time_terms.insert("two words");
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = kLex;
    bad.min_allcaps_len = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    std::istringstream in(R"({"choice_terms": ["red", "blue"], "min_allcaps_len": 3})");
    const LexiconConfig cfg = load_lexicon(in);
    CHECK(cfg.choice_terms == std::set<std::string>{"red", "blue"});
    CHECK(cfg.min_allcaps_len == 3);
    CHECK(cfg.self_terms == kLex.self_terms);

    std::istringstream broken("{not json");
    CHECK_THROWS_AS(load_lexicon(broken), ConfigError);
}

TEST_CASE("feature invariants on generated comments") {
    synth::Rng rng(7);
    for (int k = 0; k < 500; ++k) {
        const std::string text = synth::random_comment(rng, rng.uniform());
        const CommentFeatures f = extract_features(std::string_view(text), kLex);
        CHECK(f.all_caps_words <= f.word_count);
        CHECK(f.choice_reference <= f.word_count);
        CHECK(f.self_references <= f.word_count);
        if (f.word_count == 0) CHECK(f.average_word_length == 0.0);
        CHECK(extract_features(std::string_view(text), kLex) == f);

        // Appending "!" adds exactly one exclamation and nothing else that
        // is word-based.
        const CommentFeatures g = extract_features(std::string_view(text + "!"), kLex);
        CHECK(g.exclamation_points == f.exclamation_points + 1);
        CHECK(g.choice_reference == f.choice_reference);
        CHECK(g.self_references == f.self_references);
        CHECK(g.all_caps_words == f.all_caps_words);

        // Case changes leave lexicon counts alone.
        std::string upper = text, lower = text;
        for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        for (const std::string& variant : {upper, lower}) {
            const CommentFeatures h = extract_features(std::string_view(variant), kLex);
            CHECK(h.choice_reference == f.choice_reference);
            CHECK(h.time_reference == f.time_reference);
            CHECK(h.self_references == f.self_references);
        }
    }
}

namespace {

Transcript make_transcript(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::vector<Comment> comments;
    for (std::size_t k = 0; k < rows.size(); ++k)
        comments.push_back({"g", rows[k].first, std::to_string(k), double(k), k, rows[k].second});
    return Transcript("g", comments);
}

}  // namespace

TEST_CASE("aggregate_participant sums per participant") {
    const Transcript t = make_transcript({{"a", "one two three"}, {"b", "x"}, {"a", "1 2 3 4 5 6 7"}});
    const auto features = extract_all(t, kLex);
    const auto agg = aggregate_participant(t, features);
    REQUIRE(agg.size() == 2);
    CHECK(agg[0].participant_id == "a");
    CHECK(agg[0].comment_count == 2);
    CHECK(agg[0].word_count == 10);
    CHECK(agg[1].comment_count == 1);

    const Transcript solo = make_transcript({{"a", "hi ALEX!"}, {"a", "why??"}});
    const auto solo_agg = aggregate_participant(solo, extract_all(solo, kLex));
    REQUIRE(solo_agg.size() == 1);
    CHECK(solo_agg[0].exclamation_points == 1);
    CHECK(solo_agg[0].question_marks == 2);
    CHECK(solo_agg[0].choice_reference == 1);
    CHECK(solo_agg[0].comment_length_chars == 13);

    CHECK_THROWS_AS(aggregate_participant(t, std::vector<CommentFeatures>(2)), ConfigError);
}

TEST_CASE("aggregate_participant on a hand-built twelve comment table") {
    // participant, text; expected sums tabulated by hand below.
    const Transcript t = make_transcript({
        {"p1", "IT HAS TO BE ALEX"},     // words 5 caps 5 choice 1
        {"p2", "why Nali??"},            // words 2 q 2 choice 1
        {"p3", "I don't know"},          // words 3 self 1
        {"p4", "only 10 mins left"},     // words 4 time 1
        {"p5", "good point #5!!!"},      // words 3 excl 3
        {"p6", "so it is John or Nali???"},  // words 6 choice 2 q 3
        {"p1", "ALEX!"},                 // words 1 caps 1 choice 1 excl 1
        {"p2", "me too"},                // words 2 self 1
        {"p3", "hurry, time"},           // words 2 time 1
        {"p4", "ok"},                    // words 1
        {"p5", "I SAID no"},             // words 3 caps 1 self 1
        {"p6", "?"},                     // words 0 q 1
    });
    const auto agg = aggregate_participant(t, extract_all(t, kLex));
    REQUIRE(agg.size() == 6);
    struct Row { long words, caps, choice, time, excl, q, self; int n; };
    const Row expect[] = {
        {6, 6, 2, 0, 1, 0, 0, 2}, {4, 0, 1, 0, 0, 2, 1, 2}, {5, 0, 0, 1, 0, 0, 1, 2},
        {5, 0, 0, 1, 0, 0, 0, 2}, {6, 1, 0, 0, 3, 0, 1, 2}, {6, 0, 2, 0, 0, 4, 0, 2},
    };
    long total_words = 0;
    for (std::size_t k = 0; k < 6; ++k) {
        INFO("participant " << agg[k].participant_id);
        CHECK(agg[k].comment_count == expect[k].n);
        CHECK(agg[k].word_count == expect[k].words);
        CHECK(agg[k].all_caps_words == expect[k].caps);
        CHECK(agg[k].choice_reference == expect[k].choice);
        CHECK(agg[k].time_reference == expect[k].time);
        CHECK(agg[k].exclamation_points == expect[k].excl);
        CHECK(agg[k].question_marks == expect[k].q);
        CHECK(agg[k].self_references == expect[k].self);
        total_words += agg[k].word_count;
    }
    long direct = 0;
    for (const auto& f : extract_all(t, kLex)) direct += f.word_count;
    CHECK(total_words == direct);
}
