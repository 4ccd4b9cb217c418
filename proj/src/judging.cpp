#include "parley/judging.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace parley {

const char* to_string(ExtractionPath p) {
    return p == ExtractionPath::rule_based ? "rule_based" : "judge_fallback";
}

namespace {

/// Zero-temperature direct-response decoding for every judge call, whatever
/// the backend or workflow config says.
DecodingConfig judge_decoding() {
    DecodingConfig d;
    d.temperature = 0.0;
    d.strategy = Strategy::direct_response;
    return d;
}

std::string last_nonempty_line(const std::string& text) {
    std::size_t end = text.find_last_not_of(" \t\r\n");
    if (end == std::string::npos) return "";
    std::size_t start = text.find_last_of('\n', end);
    start = (start == std::string::npos) ? 0 : start + 1;
    std::string line = text.substr(start, end - start + 1);
    std::size_t b = line.find_first_not_of(" \t\r");
    return b == std::string::npos ? "" : line.substr(b);
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::optional<int> parse_verdict(const std::string& reply) {
    std::string line = upper(last_nonempty_line(reply));
    if (line == "CORRECT") return 1;
    if (line == "INCORRECT") return 0;
    return std::nullopt;
}

}  // namespace

JudgeVerdict judge_equivalence(const std::string& model_output, const std::string& ground_truth,
                               const BackendHandle& judge, const prompts::JudgePrompts& prompts) {
    std::string user = prompts::substitute(prompts.equivalence_user, "{output}", model_output);
    user = prompts::substitute(user, "{truth}", ground_truth);

    CompletionRequest req;
    req.system_prompt = prompts.equivalence_system;
    req.user_content = user;
    req.decoding = judge_decoding();
    req.agent_id = "equivalence-judge";

    CompletionResult result = complete(req, judge);
    std::optional<int> score = parse_verdict(result.answer_text);
    if (!score) {
        req.user_content = user + prompts.strict_retry;
        result = complete(req, judge);
        score = parse_verdict(result.answer_text);
    }
    if (!score)
        throw Error(ErrorKind::parse,
                    "judge verdict unparsable after re-prompt; raw reply: " + result.answer_text);

    JudgeVerdict verdict;
    verdict.score = *score;
    verdict.rationale = result.answer_text;
    verdict.judge_model = judge->name();
    verdict.judge_temperature = 0.0;
    return verdict;
}

std::optional<std::string> extract_fenced_code(const std::string& text) {
    // last complete ``` block wins; an optional language tag on the opening
    // fence line is dropped
    std::optional<std::string> found;
    std::size_t pos = 0;
    for (;;) {
        std::size_t open = text.find("```", pos);
        if (open == std::string::npos) break;
        std::size_t body = text.find('\n', open + 3);
        if (body == std::string::npos) break;
        ++body;
        std::size_t close = text.find("```", body);
        if (close == std::string::npos) break;  // unterminated fence is not a block
        std::string block = text.substr(body, close - body);
        while (!block.empty() && (block.back() == '\n' || block.back() == '\r')) block.pop_back();
        if (!block.empty()) found = block;
        pos = close + 3;
    }
    return found;
}

Extraction extract_code(const std::string& model_output, const BackendHandle& judge,
                        const prompts::JudgePrompts& prompts) {
    Extraction ex;
    if (auto block = extract_fenced_code(model_output)) {
        ex.extracted = true;
        ex.code = *block;
        ex.path = ExtractionPath::rule_based;
        return ex;
    }

    CompletionRequest req;
    req.system_prompt = prompts.extractor_system;
    req.user_content = prompts::substitute(prompts.extractor_user, "{output}", model_output);
    req.decoding = judge_decoding();
    req.agent_id = "code-extractor";
    CompletionResult result = complete(req, judge);

    ex.path = ExtractionPath::judge_fallback;
    if (auto block = extract_fenced_code(result.answer_text)) {
        ex.code = *block;
    } else {
        std::size_t b = result.answer_text.find_first_not_of(" \t\r\n");
        if (b != std::string::npos) {
            std::size_t e = result.answer_text.find_last_not_of(" \t\r\n");
            ex.code = result.answer_text.substr(b, e - b + 1);
        }
    }
    ex.extracted = !ex.code.empty();
    return ex;
}

namespace {

/// Interpreter-side harness: runs each case in the module namespace and
/// prints one sentinel line per outcome.
std::string python_harness(const std::string& code, const std::vector<std::string>& cases) {
    nlohmann::json case_list = nlohmann::json::array();
    for (const auto& c : cases) case_list.push_back(c);
    std::ostringstream prog;
    prog << code << "\n\n";
    // an ASCII-escaped JSON array is a valid Python list-of-str literal
    prog << "_parley_cases = " << case_list.dump(-1, ' ', true) << "\n";
    prog << "for _parley_i, _parley_src in enumerate(_parley_cases):\n";
    prog << "    try:\n";
    prog << "        exec(_parley_src, globals())\n";
    prog << "        print('PARLEY_TEST %d PASS' % _parley_i, flush=True)\n";
    prog << "    except BaseException:\n";
    prog << "        print('PARLEY_TEST %d FAIL' % _parley_i, flush=True)\n";
    return prog.str();
}

int count_passes(const std::string& output, int total) {
    int passed = 0;
    std::istringstream in(output);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("PARLEY_TEST ", 0) != 0) continue;
        std::istringstream fields(line.substr(12));
        int index = -1;
        std::string outcome;
        fields >> index >> outcome;
        if (index >= 0 && index < total && outcome == "PASS") ++passed;
    }
    return passed;
}

}  // namespace

CodeEvalResult run_unit_tests(const std::string& code, const TestSuite& suite,
                              const SandboxLimits& limits) {
    if (suite.cases.empty())
        throw Error(ErrorKind::contract, "run_unit_tests called with an empty suite");
    std::string interpreter = resolve_interpreter(suite.language);
    if (suite.language != "python")
        throw Error(ErrorKind::sandbox,
                    "unsupported test-suite language '" + suite.language + "'");

    SandboxResult run = run_sandboxed(interpreter, python_harness(code, suite.cases), limits);
    if (run.spawn_failed)
        throw Error(ErrorKind::sandbox, "sandbox could not exec the interpreter");

    CodeEvalResult result;
    result.extracted = true;
    result.tests_total = static_cast<int>(suite.cases.size());
    result.tests_passed = count_passes(run.output, result.tests_total);
    result.timeout = run.timed_out;
    result.score = (!result.timeout && result.tests_total > 0 &&
                    result.tests_passed == result.tests_total)
                       ? 1
                       : 0;
    return result;
}

TaskScore score_task(const TaskInstance& task, const Transcript& transcript,
                     const BackendHandle& judge, const SandboxLimits& limits,
                     const prompts::JudgePrompts& prompts) {
    TaskScore score;
    switch (task.domain) {
        case Domain::math:
        case Domain::general: {
            JudgeVerdict verdict =
                judge_equivalence(transcript.final_answer, task.ground_truth, judge, prompts);
            score.score = verdict.score;
            score.verdict = std::move(verdict);
            return score;
        }
        case Domain::code: {
            if (!task.test_suite)
                throw Error(ErrorKind::contract, "code task '" + task.id + "' has no test suite");
            Extraction ex = extract_code(transcript.final_answer, judge, prompts);
            CodeEvalResult eval;
            if (!ex.extracted) {
                eval.extracted = false;
                eval.path = ex.path;
                eval.tests_total = static_cast<int>(task.test_suite->cases.size());
                eval.score = 0;
            } else {
                eval = run_unit_tests(ex.code, *task.test_suite, limits);
                eval.path = ex.path;
            }
            score.score = eval.score;
            score.code = eval;
            return score;
        }
        case Domain::open_ended:
            throw Error(ErrorKind::contract,
                        "task '" + task.id + "' is open_ended; closed-form scoring does not "
                        "apply");
    }
    throw Error(ErrorKind::internal, "unhandled domain");
}

}  // namespace parley
