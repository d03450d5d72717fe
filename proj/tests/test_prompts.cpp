#include <doctest.h>

#include "thinslice/digest.hpp"
#include "thinslice/errors.hpp"
#include "thinslice/prompts.hpp"

using namespace thinslice;

// Frozen digests of the five built-in prompt texts. Any drift in the wording
// fails here.
static const char* kPromptDigests[5] = {
    "d8d145fd010ca8c60821b5d58641cc4bd2eb5bae21e4970c8d4a721fad3f9b1a",
    "7d6f9690d991148fb195dfc14d7d3f1e90ec43201706217135f9499474b02a93",
    "08d6e369eec9c3799554ffd5ce95d6956e2c7721255eddda010a6e7a67e5ffff",
    "087139ca654f6a07cd03f24312df5f97bb6adc297002135caa4549b779f2b943",
    "29ed53354884dd4a43ae740a800337499c8bc5de3e5c68a1101d6a9934b08967",
};

TEST_CASE("builtin_prompts: five templates, frozen texts") {
    const auto& prompts = builtin_prompts();
    REQUIRE(prompts.size() == 5);
    for (size_t i = 0; i < 5; ++i) {
        CHECK(prompts[i].prompt_id == "P" + std::to_string(i + 1));
        CHECK(prompts[i].scale_min == 1);
        CHECK(prompts[i].scale_max == 10);
        CHECK(sha256_hex(prompts[i].text) == kPromptDigests[i]);
        CHECK(prompts[i].text.ends_with("Here is the speech text: "));
    }
}

TEST_CASE("builtin_prompts: wording anchors") {
    CHECK(builtin_prompt("P1").text.find(
              "rate the speech quality on a scale from 1 (worst) to 10 (best)") !=
          std::string::npos);
    CHECK(builtin_prompt("P4").text.find(
              "Imagine you are an expert in public speaking evaluation") != std::string::npos);
    // Every built-in demands a bare single-number reply; P1/P2/P4 share one
    // phrasing, P3 and P5 use their own variants.
    for (const char* id : {"P1", "P2", "P4"}) {
        CHECK(builtin_prompt(id).text.find(
                  "Return only the single rating number as a plain integer") !=
              std::string::npos);
    }
    CHECK(builtin_prompt("P3").text.find("Provide only a single numerical rating") !=
          std::string::npos);
    CHECK(builtin_prompt("P5").text.find(
              "Return only a single rating number as a plain integer") != std::string::npos);
    CHECK_THROWS_AS(builtin_prompt("P9"), ConfigError);
}

TEST_CASE("render: pure concatenation for built-ins") {
    const auto& p1 = builtin_prompt("P1");
    auto rendered = render(p1, "hello");
    CHECK(rendered == p1.text + "hello");
    CHECK(rendered.size() == p1.text.size() + 5);
    CHECK_THROWS_AS(render(p1, ""), DataError);
}

TEST_CASE("custom prompts: placeholder substituted exactly once") {
    auto p = make_custom_prompt("C1", "Rate this: {SPEECH} -- reply with a number.");
    CHECK(render(p, "the talk") == "Rate this: the talk -- reply with a number.");

    CHECK_THROWS_AS(make_custom_prompt("C2", "no placeholder here"), ConfigError);
    CHECK_THROWS_AS(make_custom_prompt("C3", "{SPEECH} and {SPEECH}"), ConfigError);
}
