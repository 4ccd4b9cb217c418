#pragma once

#include <string>

namespace parley::prompts {

/// Built-in system prompt for a workflow role ("planner", "debater", ...).
/// Empty string for unknown roles.
std::string default_role_prompt(const std::string& base_role);

// Judging-side prompt slots. All overridable through config.
struct JudgePrompts {
    std::string equivalence_system;
    std::string equivalence_user;   // placeholders: {output}, {truth}
    std::string strict_retry;       // appended on the one allowed re-prompt
    std::string extractor_system;
    std::string extractor_user;     // placeholder: {output}
};
JudgePrompts default_judge_prompts();

struct MimePrompts {
    std::string generate_system;
    std::string generate_format;        // appended after passage/question
    std::string criteria_correct_system;
    std::string criteria_distractor_system;
    std::string judge_system;           // placeholders: {fluency_max}, {confusability_max}, {third_max}, {third_label}
    std::string strict_retry;
};
MimePrompts default_mime_prompts();

/// Replaces every occurrence of `placeholder` (e.g. "{output}") in `text`.
std::string substitute(std::string text, const std::string& placeholder, const std::string& value);

}  // namespace parley::prompts
