#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chatdom/csv.hpp"
#include "chatdom/error.hpp"
#include "chatdom/pipeline.hpp"
#include "chatdom/synthetic.hpp"

using namespace chatdom;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("chatdom_pipeline_" + std::to_string(::getpid()) + "_" +
                                             std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

// Writes a synthetic corpus and returns a config pointing at it.
pipeline::RunConfig write_corpus(const TempDir& dir, const synth::SyntheticCorpus& c, bool with_annotations = true) {
    pipeline::RunConfig cfg;
    for (const Transcript& t : c.transcripts) {
        const std::string path = dir.file(t.group_id() + ".csv");
        std::ofstream out(path, std::ios::binary);
        write_transcript_csv(out, t);
        cfg.transcripts.push_back(path);
    }
    if (with_annotations) {
        const std::string path = dir.file("annotations.csv");
        std::ofstream out(path, std::ios::binary);
        write_annotations_csv(out, c.annotations);
        cfg.annotations = path;
    }
    cfg.output_dir = dir.file("out");
    return cfg;
}

std::vector<csv::Record> rows_of(const std::string& content) { return csv::read_all(std::string_view(content)); }

}  // namespace

TEST_CASE("stats over seven synthetic groups") {
    TempDir dir;
    const auto corpus = synth::make_corpus({});
    const auto cfg = write_corpus(dir, corpus, false);
    const auto result = pipeline::cmd_stats(cfg);
    const auto j = nlohmann::json::parse(result.files.at("stats.json"));
    CHECK(j["corpus"]["group_count"] == 7);
    for (const char* field : {"comments", "length", "words"}) {
        const double total = j["corpus"][field]["total"].get<double>();
        CHECK(j["corpus"][field]["mean"].get<double>() == doctest::Approx(total / 7.0).epsilon(5e-6));
        CHECK(j["corpus"][field]["sd_defined"] == true);
    }
    CHECK(result.files.contains("stats.csv"));
}

TEST_CASE("stats over one transcript flags the SD") {
    TempDir dir;
    synth::CorpusSpec spec;
    spec.groups = 1;
    const auto cfg = write_corpus(dir, synth::make_corpus(spec), false);
    const auto result = pipeline::cmd_stats(cfg);
    const auto j = nlohmann::json::parse(result.files.at("stats.json"));
    CHECK(j["corpus"]["comments"]["sd_defined"] == false);
    CHECK_FALSE(result.notices.empty());
}

TEST_CASE("missing transcript path is named") {
    pipeline::RunConfig cfg;
    cfg.transcripts = {"/nonexistent/chat_g9.csv"};
    try {
        pipeline::cmd_stats(cfg);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/chat_g9.csv") != std::string::npos);
    }
}

TEST_CASE("parse errors carry the file path") {
    TempDir dir;
    write_file(dir.file("bad.csv"), "group_id,participant_id,timestamp,text\ng,a,0,ok\ng,b\n");
    pipeline::RunConfig cfg;
    cfg.transcripts = {dir.file("bad.csv")};
    try {
        pipeline::cmd_stats(cfg);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.csv") != std::string::npos);
        CHECK(msg.find("line 3") != std::string::npos);
    }
    write_file(dir.file("empty.csv"), "");
    cfg.transcripts = {dir.file("empty.csv")};
    CHECK_THROWS_AS(pipeline::cmd_stats(cfg), ParseError);
}

TEST_CASE("config validation") {
    pipeline::RunConfig cfg;
    CHECK_THROWS_AS(pipeline::validate(cfg), ConfigError);
    cfg.transcripts = {"x.csv"};
    cfg.formats = {"csv", "pdf"};
    CHECK_THROWS_AS(pipeline::validate(cfg), ConfigError);
    cfg.formats = {"csv"};
    cfg.threshold = 2.0;
    CHECK_THROWS_AS(pipeline::validate(cfg), ConfigError);
}

TEST_CASE("fit recovers a planted choice effect") {
    TempDir dir;
    synth::CorpusSpec spec;
    spec.groups = 6;
    spec.min_comments = 200;
    spec.max_comments = 260;
    spec.seed = 99;
    spec.intercept = -2.0;
    spec.effects = {{"ChoiceReference", 2.0}};
    const auto corpus = synth::make_corpus(spec);
    REQUIRE(corpus.truth.size() >= 1000);
    const auto cfg = write_corpus(dir, corpus);
    const auto result = pipeline::cmd_fit(cfg);
    const auto m1 = glm::model_from_json(nlohmann::json::parse(result.files.at("model1.json")));
    CHECK(m1.converged);
    const std::size_t k = *m1.index_of("ChoiceReference");
    CHECK(m1.beta[k] > 1.0);
    CHECK(m1.beta[k] < 3.0);
    CHECK(glm::significance_stars(m1.wald_chisq[k]) == "***");
    CHECK(result.files.contains("model2.json"));
    CHECK(result.files.contains("model3.json"));
    const auto cmp = nlohmann::json::parse(result.files.at("comparison.json"));
    REQUIRE(cmp.size() == 3);
    CHECK(cmp[0]["aic"].get<double>() <= cmp[1]["aic"].get<double>());
    CHECK(cmp[1]["aic"].get<double>() <= cmp[2]["aic"].get<double>());
    CHECK(result.files.at("coefficients.csv").find("ChoiceReference") != std::string::npos);
}

TEST_CASE("fit without manual codes keeps Model 1 only") {
    TempDir dir;
    synth::CorpusSpec spec;
    spec.groups = 3;
    auto cfg = write_corpus(dir, synth::make_corpus(spec), false);

    std::ostringstream ann;
    ann << "group_id,seq,ed_a,ed_b\n";
    const auto corpus = synth::make_corpus(spec);
    for (const auto& [key, a] : corpus.annotations.entries)
        ann << key.group_id << ',' << key.seq << ',' << a.ed.coder_a << ',' << a.ed.coder_a << '\n';
    write_file(dir.file("ed_only.csv"), ann.str());
    cfg.annotations = dir.file("ed_only.csv");

    const auto result = pipeline::cmd_fit(cfg);
    CHECK(result.files.contains("model1.json"));
    CHECK_FALSE(result.files.contains("model2.json"));
    CHECK_FALSE(result.files.contains("model3.json"));
    CHECK_FALSE(result.files.contains("comparison.csv"));
    bool noticed = false;
    for (const auto& n : result.notices) noticed |= n.find("skipped") != std::string::npos;
    CHECK(noticed);
}

TEST_CASE("fit with all-zero labels reports a single class") {
    TempDir dir;
    synth::CorpusSpec spec;
    spec.groups = 2;
    auto cfg = write_corpus(dir, synth::make_corpus(spec), false);
    write_file(dir.file("zero.csv"), "group_id,seq,ed_a,ed_b\n");
    cfg.annotations = dir.file("zero.csv");
    try {
        pipeline::cmd_fit(cfg);
        FAIL("expected ModelError");
    } catch (const ModelError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("Model 1") != std::string::npos);
        CHECK(msg.find("single class") != std::string::npos);
    }
}

TEST_CASE("fit with unresolved labels points to reconcile") {
    TempDir dir;
    synth::CorpusSpec spec;
    spec.groups = 2;
    spec.reconciled = false;
    spec.coder_b_flip = 0.2;
    const auto cfg = write_corpus(dir, synth::make_corpus(spec));
    try {
        pipeline::cmd_fit(cfg);
        FAIL("expected ModelError");
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("reconcile") != std::string::npos);
    }
    auto fallback = cfg;
    fallback.fallback_coder_a = true;
    CHECK_NOTHROW(pipeline::cmd_fit(fallback));
    auto scoring = cfg;
    scoring.model = "m.json";
    CHECK_THROWS_AS(pipeline::cmd_fit(scoring), ConfigError);
}

TEST_CASE("score with a zero model") {
    TempDir dir;
    synth::CorpusSpec spec;
    spec.groups = 2;
    auto cfg = write_corpus(dir, synth::make_corpus(spec), false);
    nlohmann::json m = {{"columns", nlohmann::json::array()}};
    m["columns"].push_back({{"name", "Intercept"}, {"estimate", 0.0}});
    for (const auto& c : pipeline::model1_columns()) m["columns"].push_back({{"name", c}, {"estimate", 0.0}});
    write_file(dir.file("zero_model.json"), m.dump());
    cfg.model = dir.file("zero_model.json");

    const auto result = pipeline::cmd_score(cfg);
    const auto rows = rows_of(result.files.at("scores.csv"));
    REQUIRE(rows.size() > 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        CHECK(rows[r].fields[2] == "0.5");
        CHECK(rows[r].fields[3] == "0");
    }
    const auto dom = nlohmann::json::parse(result.files.at("dominance.json"));
    CHECK(dom["dominant_count"] == 0);
    CHECK(result.files.contains("dominance.svg"));
    CHECK_FALSE(result.files.contains("evaluation.json"));
}

TEST_CASE("score with the reference first model ranks hand-computed comments") {
    TempDir dir;
    write_file(dir.file("g.csv"),
               "group_id,participant_id,timestamp,text\n"
               "g,a,0,ok thanks\n"
               "g,b,5,I think Alex\n"
               "g,c,9,\"Alex or Nali, no time left!\"\n"
               "g,a,12,why?\n"
               "g,b,15,\"JOHN, 5 minutes\"\n");
    pipeline::RunConfig cfg;
    cfg.transcripts = {dir.file("g.csv")};
    cfg.model = std::string(CHATDOM_SOURCE_DIR) + "/models/reference_model1.json";

    // Intercept + length, words, mean word length, choice, caps, time, !, ?, self.
    const double b[] = {-1.20, -0.001, -0.04, -0.20, 2.43, 0.06, 5.57, 0.16, -0.92, 0.27};
    const double x[5][9] = {{9, 2, 4.0, 0, 0, 0, 0, 0, 0},
                            {12, 3, 10.0 / 3.0, 1, 0, 0, 0, 0, 1},
                            {27, 6, 20.0 / 6.0, 2, 0, 1, 1, 0, 0},
                            {4, 1, 3.0, 0, 0, 0, 0, 1, 0},
                            {15, 3, 4.0, 1, 1, 1, 0, 0, 0}};
    const auto result = pipeline::cmd_score(cfg);
    const auto rows = rows_of(result.files.at("scores.csv"));
    REQUIRE(rows.size() == 6);
    std::vector<double> p;
    for (int k = 0; k < 5; ++k) {
        double eta = b[0];
        for (int j = 0; j < 9; ++j) eta += b[j + 1] * x[k][j];
        const double expected = 1.0 / (1.0 + std::exp(-eta));
        p.push_back(std::stod(rows[std::size_t(k) + 1].fields[2]));
        CHECK(p.back() == doctest::Approx(expected).epsilon(1e-5));
    }
    // Choice plus time pressure first, then choice plus time, then choice alone.
    CHECK(p[2] > p[4]);
    CHECK(p[4] > p[1]);
    CHECK(p[1] > p[0]);
    CHECK(p[0] > p[3]);
}

TEST_CASE("score with threshold 1 predicts nothing") {
    TempDir dir;
    synth::CorpusSpec spec;
    spec.groups = 2;
    auto cfg = write_corpus(dir, synth::make_corpus(spec));
    cfg.model = std::string(CHATDOM_SOURCE_DIR) + "/models/reference_model1.json";
    cfg.threshold = 1.0;
    const auto result = pipeline::cmd_score(cfg);
    const auto rows = rows_of(result.files.at("scores.csv"));
    for (std::size_t r = 1; r < rows.size(); ++r) CHECK(rows[r].fields[3] == "0");
    const auto dom = nlohmann::json::parse(result.files.at("dominance.json"));
    CHECK(dom["warnings"].size() == 2);
    CHECK(result.notices.size() >= 2);
    const auto eval = nlohmann::json::parse(result.files.at("evaluation.json"));
    CHECK(eval["precision"].is_null());
}

TEST_CASE("score rejects a model with unknown columns") {
    TempDir dir;
    synth::CorpusSpec spec;
    spec.groups = 1;
    auto cfg = write_corpus(dir, synth::make_corpus(spec), false);
    write_file(dir.file("odd.json"),
               R"({"columns":[{"name":"Intercept","estimate":0},{"name":"Mystery","estimate":1}]})");
    cfg.model = dir.file("odd.json");
    try {
        pipeline::cmd_score(cfg);
        FAIL("expected ModelError");
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("Mystery") != std::string::npos);
    }
}

TEST_CASE("kappa through files") {
    TempDir dir;
    std::ostringstream chat, ann;
    chat << "group_id,participant_id,timestamp,text\n";
    ann << "group_id,seq,ed_a,ed_b\n";
    // 30 agree yes, 20 + 20 disagree, 30 agree no.
    for (int k = 0; k < 100; ++k) {
        chat << "g,p" << k % 6 << ',' << k << ",hello\n";
        const int a = k < 50, b = k < 30 || (k >= 50 && k < 70);
        ann << "g," << k << ',' << a << ',' << b << '\n';
    }
    write_file(dir.file("g.csv"), chat.str());
    write_file(dir.file("ann.csv"), ann.str());
    pipeline::RunConfig cfg;
    cfg.transcripts = {dir.file("g.csv")};
    cfg.annotations = dir.file("ann.csv");
    const auto result = pipeline::cmd_kappa(cfg);
    const auto j = nlohmann::json::parse(result.files.at("reliability.json"));
    REQUIRE(j.size() >= 1);
    CHECK(j[0]["column"] == "ed");
    CHECK(j[0]["po"].get<double>() == doctest::Approx(0.6));
    CHECK(j[0]["pe"].get<double>() == doctest::Approx(0.5));
    CHECK(j[0]["cohens_kappa"].get<double>() == doctest::Approx(0.2));

    write_file(dir.file("one_coder.csv"), "group_id,seq,ed_a\ng,0,1\n");
    cfg.annotations = dir.file("one_coder.csv");
    CHECK_THROWS_AS(pipeline::cmd_kappa(cfg), ConfigError);
}

TEST_CASE("reconcile and report") {
    TempDir dir;
    synth::CorpusSpec spec;
    spec.groups = 2;
    spec.reconciled = false;
    spec.coder_b_flip = 0.2;
    const auto corpus = synth::make_corpus(spec);
    auto cfg = write_corpus(dir, corpus);

    std::ostringstream res;
    res << "group_id,seq,resolved\n";
    for (const auto& l : corpus.annotations.labels())
        if (!l.agrees()) res << l.key.group_id << ',' << l.key.seq << ',' << l.coder_a << '\n';
    write_file(dir.file("res.csv"), res.str());
    cfg.resolutions = dir.file("res.csv");
    const auto rec = pipeline::cmd_reconcile(cfg);
    write_file(dir.file("reconciled.csv"), rec.files.at("annotations.reconciled.csv"));

    auto report_cfg = cfg;
    report_cfg.resolutions.reset();
    report_cfg.annotations = dir.file("reconciled.csv");
    const auto report = pipeline::cmd_report(report_cfg);
    const auto dom = nlohmann::json::parse(report.files.at("dominance.json"));
    CHECK(dom["participants"].size() == 12);

    // Byte-identical on a second run.
    CHECK(pipeline::cmd_report(report_cfg).files == report.files);

    pipeline::write_outputs(cfg.output_dir, report);
    CHECK(fs::exists(fs::path(cfg.output_dir) / "dominance.json"));
    CHECK(fs::exists(fs::path(cfg.output_dir) / "dominance.svg"));
}

TEST_CASE("extract writes per-comment and per-participant tables") {
    TempDir dir;
    synth::CorpusSpec spec;
    spec.groups = 2;
    const auto corpus = synth::make_corpus(spec);
    auto cfg = write_corpus(dir, corpus, false);
    cfg.formats = {"csv"};
    const auto result = pipeline::cmd_extract(cfg);
    CHECK_FALSE(result.files.contains("participants.json"));
    const auto rows = rows_of(result.files.at("features.csv"));
    CHECK(rows.size() == corpus.truth.size() + 1);
    const auto parts = rows_of(result.files.at("participants.csv"));
    CHECK(parts.size() == 13);
}
