// Writes the bundled synthetic corpus: one transcript CSV per group plus
// an annotation CSV with manual codes and reconciled ED labels.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "chatdom/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic chat corpus"};
    std::string out_dir = "data/synthetic";
    chatdom::synth::CorpusSpec spec;
    app.add_option("-o,--output-dir", out_dir, "Destination directory");
    app.add_option("--groups", spec.groups, "Number of groups");
    app.add_option("--members", spec.members, "Members per group");
    app.add_option("--seed", spec.seed, "Random seed");
    CLI11_PARSE(app, argc, argv);

    const auto corpus = chatdom::synth::make_corpus(spec);
    std::filesystem::create_directories(out_dir);
    for (const auto& t : corpus.transcripts) {
        std::ofstream out(std::filesystem::path(out_dir) / (t.group_id() + ".csv"), std::ios::binary);
        chatdom::write_transcript_csv(out, t);
    }
    std::ofstream ann(std::filesystem::path(out_dir) / "annotations.csv", std::ios::binary);
    chatdom::write_annotations_csv(ann, corpus.annotations);
    std::cout << "wrote " << corpus.transcripts.size() << " transcripts to " << out_dir << '\n';
    return 0;
}
