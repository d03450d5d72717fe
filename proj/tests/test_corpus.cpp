#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "thinslice/corpus.hpp"
#include "thinslice/csv.hpp"
#include "thinslice/errors.hpp"

using namespace thinslice;

TEST_CASE("tokenize: whitespace splitting") {
    CHECK(tokenize("um, so today") == std::vector<std::string>{"um,", "so", "today"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("a  b\t c\n") == std::vector<std::string>{"a", "b", "c"});
    CHECK(tokenize("  leading and trailing  ") ==
          std::vector<std::string>{"leading", "and", "trailing"});
}

TEST_CASE("tokenize: idempotent under single-space rejoin") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto text = test_util::synthetic_text(rng, 1 + static_cast<int>(rng() % 200));
        auto words = tokenize(text);
        std::string joined;
        for (size_t i = 0; i < words.size(); ++i) {
            if (i) joined.push_back(' ');
            joined += words[i];
        }
        CHECK(tokenize(joined) == words);
    }
}

TEST_CASE("load_corpus: basic loading and ordering") {
    test_util::TempDir dir("corpus");
    test_util::write_file(dir.path() / "b.txt", "one two three");
    test_util::write_file(dir.path() / "a.txt", "hello world");

    auto corpus = load_corpus(dir.path(), 1);
    REQUIRE(corpus.transcripts.size() == 2);
    CHECK(corpus.transcripts[0].speech_id == "a");
    CHECK(corpus.transcripts[0].word_count == 2);
    CHECK(corpus.transcripts[1].speech_id == "b");
    CHECK(corpus.transcripts[1].word_count == 3);
}

TEST_CASE("load_corpus: min_words exclusion is reported") {
    test_util::TempDir dir("corpus");
    std::mt19937_64 rng(1);
    test_util::write_file(dir.path() / "long.txt", test_util::synthetic_text(rng, 60));
    std::string forty;
    for (int i = 0; i < 40; ++i) forty += "w ";
    test_util::write_file(dir.path() / "short.txt", forty);

    auto corpus = load_corpus(dir.path(), 50);
    REQUIRE(corpus.transcripts.size() == 1);
    CHECK(corpus.transcripts[0].speech_id == "long");
    REQUIRE(corpus.excluded.size() == 1);
    CHECK(corpus.excluded[0].file == "short.txt");
    CHECK(corpus.excluded[0].word_count == 40);
}

TEST_CASE("load_corpus: empty corpus is an error") {
    test_util::TempDir dir("corpus");
    CHECK_THROWS_AS(load_corpus(dir.path(), 1), DataError);
    CHECK_THROWS_AS(load_corpus(dir.path() / "missing", 1), DataError);
}

TEST_CASE("load_corpus: 128 files load as 128 transcripts") {
    test_util::TempDir dir("corpus");
    test_util::make_synthetic_corpus(dir.path(), 128, 11, 100, 300);
    auto corpus = load_corpus(dir.path(), 50);
    CHECK(corpus.transcripts.size() == 128);
}

TEST_CASE("load_corpus: deterministic, manifest_hash tracks content") {
    test_util::TempDir dir("corpus");
    test_util::make_synthetic_corpus(dir.path(), 5, 3, 60, 120);

    auto c1 = load_corpus(dir.path(), 1);
    auto c2 = load_corpus(dir.path(), 1);
    CHECK(c1.manifest_hash == c2.manifest_hash);
    REQUIRE(c1.transcripts.size() == c2.transcripts.size());
    for (size_t i = 0; i < c1.transcripts.size(); ++i) {
        CHECK(c1.transcripts[i].speech_id == c2.transcripts[i].speech_id);
        CHECK(c1.transcripts[i].text == c2.transcripts[i].text);
    }

    test_util::write_file(dir.path() / "speech_000.txt",
                          c1.transcripts[0].text + " extra word tail here padding");
    auto c3 = load_corpus(dir.path(), 1);
    CHECK(c3.manifest_hash != c1.manifest_hash);
}

TEST_CASE("write_manifest: expected header and rows") {
    test_util::TempDir dir("corpus");
    test_util::write_file(dir.path() / "a.txt", "hello world");
    auto corpus = load_corpus(dir.path(), 1);
    write_manifest(corpus, dir.path() / "manifest.csv");

    auto rows = csv::read_file(dir.path() / "manifest.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"speech_id", "file", "word_count", "sha256"});
    CHECK(rows[1][0] == "a");
    CHECK(rows[1][2] == "2");
    CHECK(rows[1][3].size() == 64);
}
