#include "thinslice/prompts.hpp"

#include "thinslice/errors.hpp"

namespace thinslice {

const std::vector<PromptTemplate>& builtin_prompts() {
    static const std::vector<PromptTemplate> prompts = {
        {"P1",
         "Here is a transcript from a public presentation on a science/research topic. "
         "Please rate the speech quality on a scale from 1 (worst) to 10 (best). "
         "Consider factors such as clarity, engagement, and how easy it is to follow. "
         "Return only the single rating number as a plain integer, with no other text "
         "or characters. Here is the speech text: "},
        {"P2",
         "You will receive a transcript of a science/research presentation. Rate the "
         "overall rhetorical quality on a scale from 1 (worst) to 10 (best), "
         "considering clarity, engagement, structure, and delivery. Return only the "
         "single rating number as a plain integer, with no other text or characters. "
         "Here is the speech text: "},
        {"P3",
         "Given the following transcript of a science/research presentation, assess "
         "its overall speech quality. Focus on aspects such as clarity, engagement, "
         "and coherence. Provide only a single numerical rating from 1 (worst) to 10 "
         "(best), without any additional text. Here is the speech text: "},
        {"P4",
         "Imagine you are an expert in public speaking evaluation. Below is a "
         "transcript from a science/research presentation. Please rate the "
         "effectiveness of the speech on a scale of 1 (worst) to 10 (best) based on "
         "clarity, engagement, and ease of understanding. Return only the single "
         "rating number as a plain integer, with no other text or characters. Here is "
         "the speech text: "},
        {"P5",
         "Please evaluate the following transcript of a public science/research "
         "presentation. Assign a quality rating from 1 (worst) to 10 (best) based on "
         "your assessment. Return only a single rating number as a plain integer, "
         "with no other text or characters. Here is the speech text: "},
    };
    return prompts;
}

const PromptTemplate& builtin_prompt(std::string_view prompt_id) {
    for (const auto& p : builtin_prompts()) {
        if (p.prompt_id == prompt_id) return p;
    }
    throw ConfigError("unknown built-in prompt: " + std::string(prompt_id));
}

PromptTemplate make_custom_prompt(std::string prompt_id, std::string text) {
    auto first = text.find(kSpeechPlaceholder);
    if (first == std::string::npos) {
        throw ConfigError("custom prompt '" + prompt_id + "' lacks the " +
                          std::string(kSpeechPlaceholder) + " placeholder");
    }
    if (text.find(kSpeechPlaceholder, first + 1) != std::string::npos) {
        throw ConfigError("custom prompt '" + prompt_id + "' has more than one " +
                          std::string(kSpeechPlaceholder) + " placeholder");
    }
    return {std::move(prompt_id), std::move(text)};
}

std::string render(const PromptTemplate& p, std::string_view slice_text) {
    if (slice_text.empty()) {
        throw DataError("empty slice text for prompt " + p.prompt_id);
    }
    auto pos = p.text.find(kSpeechPlaceholder);
    if (pos == std::string::npos) {
        std::string out = p.text;
        out += slice_text;
        return out;
    }
    std::string out = p.text.substr(0, pos);
    out += slice_text;
    out += p.text.substr(pos + kSpeechPlaceholder.size());
    return out;
}

}  // namespace thinslice
