#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace thinslice {

/// One cleaned speech transcript. `words` is exactly the whitespace
/// tokenization of `text`; fillers and repetitions are kept as-is.
struct Transcript {
    std::string speech_id;
    std::string text;
    std::vector<std::string> words;
    std::size_t word_count = 0;
};

struct ExcludedTranscript {
    std::string file;
    std::size_t word_count = 0;
};

/// Immutable after load_corpus; transcripts sorted by speech_id.
struct Corpus {
    std::vector<Transcript> transcripts;
    std::filesystem::path source_dir;
    std::string manifest_hash;
    std::vector<ExcludedTranscript> excluded;

    const Transcript* find(std::string_view speech_id) const;
};

/// Maximal runs of non-whitespace characters, original order, no
/// normalization. Empty text yields an empty sequence.
std::vector<std::string> tokenize(std::string_view text);

Transcript make_transcript(std::string speech_id, std::string text);

/// Load every *.txt file in `dir` (non-recursive) as one transcript,
/// speech_id = file stem. Files below min_words are excluded and reported.
/// Throws DataError on empty corpus, duplicate ids, or unreadable files.
Corpus load_corpus(const std::filesystem::path& dir, std::size_t min_words = 50);

/// Write `manifest.csv`: speech_id,file,word_count,sha256.
void write_manifest(const Corpus& corpus, const std::filesystem::path& csv_path);

}  // namespace thinslice
