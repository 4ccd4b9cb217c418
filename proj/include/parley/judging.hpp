#pragma once

#include <optional>
#include <string>

#include "parley/backend.hpp"
#include "parley/prompts.hpp"
#include "parley/sandbox.hpp"
#include "parley/workflow.hpp"

namespace parley {

/// Binary equivalence verdict from the automated judge.
struct JudgeVerdict {
    int score = 0;  // {0,1}
    std::string rationale;
    std::string judge_model;
    double judge_temperature = 0.0;
};

enum class ExtractionPath { rule_based, judge_fallback };
const char* to_string(ExtractionPath p);

struct CodeEvalResult {
    bool extracted = false;
    ExtractionPath path = ExtractionPath::rule_based;
    int tests_total = 0;
    int tests_passed = 0;
    int score = 0;  // 1 iff tests_passed == tests_total > 0 and no timeout
    bool timeout = false;
};

/// Asks the judge whether `model_output` matches `ground_truth` up to
/// approximate equivalence. The judge call always goes out at temperature 0,
/// direct response, whatever the configured decoding says. An unparsable
/// verdict is retried once with a stricter re-prompt, then raised.
JudgeVerdict judge_equivalence(const std::string& model_output, const std::string& ground_truth,
                               const BackendHandle& judge,
                               const prompts::JudgePrompts& prompts = prompts::default_judge_prompts());

/// Rule pass: the last complete fenced code block, language tag tolerated.
/// Never throws; nullopt means the fallback extractor is needed.
std::optional<std::string> extract_fenced_code(const std::string& text);

struct Extraction {
    bool extracted = false;
    std::string code;
    ExtractionPath path = ExtractionPath::rule_based;
};

/// Rule-based extraction with the judge-as-extractor fallback. extracted=false
/// when both passes come up empty.
Extraction extract_code(const std::string& model_output, const BackendHandle& judge,
                        const prompts::JudgePrompts& prompts = prompts::default_judge_prompts());

/// Runs `code` followed by the suite's cases in an isolated child process.
/// Timeout yields score 0 with the flag set; a sandbox that cannot even spawn
/// raises Error(sandbox) instead of scoring.
CodeEvalResult run_unit_tests(const std::string& code, const TestSuite& suite,
                              const SandboxLimits& limits);

/// Per-task score plus whichever verdict record the domain produced.
struct TaskScore {
    int score = 0;
    std::optional<JudgeVerdict> verdict;    // math / general
    std::optional<CodeEvalResult> code;     // code
};

/// Domain dispatch: math/general go to the judge, code goes through
/// extraction + unit tests. open_ended tasks are a contract violation here.
TaskScore score_task(const TaskInstance& task, const Transcript& transcript,
                     const BackendHandle& judge, const SandboxLimits& limits,
                     const prompts::JudgePrompts& prompts = prompts::default_judge_prompts());

}  // namespace parley
