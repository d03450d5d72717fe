#include "thinslice/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "thinslice/csv.hpp"
#include "thinslice/digest.hpp"
#include "thinslice/errors.hpp"

namespace thinslice {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

std::string read_text_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError("unreadable file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw DataError("unreadable file: " + p.string());
    return ss.str();
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> words;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
        size_t start = i;
        while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) words.emplace_back(text.substr(start, i - start));
    }
    return words;
}

Transcript make_transcript(std::string speech_id, std::string text) {
    Transcript t;
    t.speech_id = std::move(speech_id);
    t.text = std::move(text);
    t.words = tokenize(t.text);
    t.word_count = t.words.size();
    return t;
}

const Transcript* Corpus::find(std::string_view speech_id) const {
    auto it = std::lower_bound(transcripts.begin(), transcripts.end(), speech_id,
                               [](const Transcript& t, std::string_view id) {
                                   return t.speech_id < id;
                               });
    if (it != transcripts.end() && it->speech_id == speech_id) return &*it;
    return nullptr;
}

Corpus load_corpus(const std::filesystem::path& dir, std::size_t min_words) {
    if (!std::filesystem::is_directory(dir)) {
        throw DataError("corpus directory does not exist: " + dir.string());
    }

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.stem() < b.stem(); });

    Corpus corpus;
    corpus.source_dir = dir;
    std::string hash_input;
    for (const auto& file : files) {
        std::string id = file.stem().string();
        if (corpus.find(id) != nullptr) {
            throw DataError("duplicate speech_id: " + id);
        }
        Transcript t = make_transcript(id, read_text_file(file));
        if (t.word_count < min_words) {
            corpus.excluded.push_back({file.filename().string(), t.word_count});
            continue;
        }
        corpus.transcripts.push_back(std::move(t));
    }
    if (corpus.transcripts.empty()) {
        throw DataError("empty corpus: no transcript with >= " + std::to_string(min_words) +
                        " words in " + dir.string());
    }
    for (const auto& t : corpus.transcripts) {
        hash_input += t.speech_id;
        hash_input.push_back('\x1f');
        hash_input += sha256_hex(t.text);
        hash_input.push_back('\n');
    }
    corpus.manifest_hash = sha256_hex(hash_input);
    return corpus;
}

void write_manifest(const Corpus& corpus, const std::filesystem::path& csv_path) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw DataError("cannot write manifest: " + csv_path.string());
    out << "speech_id,file,word_count,sha256\n";
    for (const auto& t : corpus.transcripts) {
        out << csv::join_row({t.speech_id, t.speech_id + ".txt",
                              std::to_string(t.word_count), sha256_hex(t.text)})
            << "\n";
    }
}

}  // namespace thinslice
