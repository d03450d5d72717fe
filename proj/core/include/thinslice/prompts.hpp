#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace thinslice {

/// Marker substituted with the slice text when rendering custom templates.
inline constexpr std::string_view kSpeechPlaceholder = "{SPEECH}";

/// A rating prompt. Built-ins P1..P5 end with "Here is the speech text: "
/// and take the slice text appended at the end; custom templates carry an
/// explicit {SPEECH} placeholder instead.
struct PromptTemplate {
    std::string prompt_id;
    std::string text;
    int scale_min = 1;
    int scale_max = 10;
};

/// The five built-in templates, ids P1..P5. Texts are frozen; a digest test
/// guards against drift.
const std::vector<PromptTemplate>& builtin_prompts();

const PromptTemplate& builtin_prompt(std::string_view prompt_id);

/// Validate a custom template: must contain {SPEECH} exactly once.
PromptTemplate make_custom_prompt(std::string prompt_id, std::string text);

/// Append (built-in) or substitute (custom) the slice text. Throws DataError
/// on empty slice_text.
std::string render(const PromptTemplate& p, std::string_view slice_text);

}  // namespace thinslice
