#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parley/backend.hpp"

namespace parley {

enum class Domain { math, general, code, open_ended };
enum class Paradigm {
    single_direct,
    single_cot,
    plan_execute,
    reflection,
    interactive_debate,
    adversarial_debate,
};
enum class AggregatorMode { llm, deterministic_majority };
enum class MessageKind { plan, feedback, candidate_answer, rebuttal, verdict, reasoning, final_answer };

const char* to_string(Domain d);
const char* to_string(Paradigm p);
const char* to_string(AggregatorMode m);
const char* to_string(MessageKind k);
Domain domain_from_string(const std::string& s);
Paradigm paradigm_from_string(const std::string& s);
AggregatorMode aggregator_mode_from_string(const std::string& s);
MessageKind message_kind_from_string(const std::string& s);

/// Unit-test suite attached to a code task. Cases are statements executed in
/// the interpreter after the extracted code.
struct TestSuite {
    std::string language = "python";
    std::vector<std::string> cases;
};

/// One benchmark item.
struct TaskInstance {
    std::string id;
    Domain domain = Domain::general;
    std::string input;         // the task input x
    std::string ground_truth;  // answer text (math/general)
    std::optional<TestSuite> test_suite;  // code tasks
    std::string source_dataset;

    void validate() const;  // ground-truth kind must match the domain
};

/// One agent utterance within a workflow run.
struct Message {
    int index = 0;
    std::string agent_id;
    std::string role;
    int round = 0;
    MessageKind kind = MessageKind::final_answer;
    std::string content;
    std::optional<std::string> reasoning;  // delimited think segment, when one was emitted
    std::int64_t tokens = 0;
    UsageSource usage_source = UsageSource::backend_reported;
};

struct WorkflowConfig {
    Paradigm paradigm = Paradigm::single_direct;
    int n_debaters = 3;  // interactive debate only
    int rounds = 1;
    std::map<std::string, std::string> role_prompts;    // overrides; defaults fill the rest
    std::map<std::string, DecodingConfig> decoding;     // per role; "*" is the fallback
    AggregatorMode aggregator_mode = AggregatorMode::llm;
    std::string answer_marker = "FINAL:";               // final-answer extraction marker
    bool reflection_single_call = false;                // fold feedback+revision into one call

    void validate() const;
    /// Effective system prompt for a role: exact override, base-role override
    /// ("debater" covers "debater-3"), else the built-in default.
    std::string prompt_for(const std::string& role) const;
    DecodingConfig decoding_for(const std::string& role) const;
};

/// Ordered record of one workflow run.
struct Transcript {
    std::string task_id;
    WorkflowConfig workflow;
    std::vector<Message> messages;
    std::string final_answer;
    std::int64_t total_cost = 0;
    std::int64_t query_prompt_tokens = 0;  // prompt tokens of the first call
    std::chrono::milliseconds wall_time{0};
    bool aggregator_fallback = false;  // llm aggregation fell back to majority
    bool failed = false;
    std::string failure;
};

/// Thrown when a stage fails mid-run; carries the partial transcript so the
/// caller can persist it with a failure marker.
class WorkflowError : public Error {
public:
    WorkflowError(std::string message, Transcript partial, ErrorKind kind = ErrorKind::transport)
        : Error(kind, std::move(message)), partial_(std::move(partial)) {}

    const Transcript& partial() const { return partial_; }

private:
    Transcript partial_;
};

// ---------------------------------------------------------------------------
// Workflow runs. Each produces a Transcript whose message order follows the
// paradigm's protocol; the final answer is always the last message.
// ---------------------------------------------------------------------------

Transcript run_single_model(const TaskInstance& task, const WorkflowConfig& cfg,
                            const BackendHandle& backend);

Transcript run_plan_execute(const TaskInstance& task, const WorkflowConfig& cfg,
                            const BackendHandle& planner, const BackendHandle& executor);

Transcript run_reflection(const TaskInstance& task, const WorkflowConfig& cfg,
                          const BackendHandle& reasoner, const BackendHandle& reviser);

Transcript run_interactive_debate(const TaskInstance& task, const WorkflowConfig& cfg,
                                  const std::vector<BackendHandle>& debaters,
                                  const BackendHandle& aggregator);

Transcript run_adversarial_debate(const TaskInstance& task, const WorkflowConfig& cfg,
                                  const BackendHandle& affirmative, const BackendHandle& negative,
                                  const BackendHandle& judge);

/// Role name → backend; used by the dispatcher below. Lookup falls back from
/// the exact role ("debater-2") to the base role ("debater") to "*".
using RoleBackends = std::map<std::string, BackendHandle>;

Transcript run_workflow(const TaskInstance& task, const WorkflowConfig& cfg,
                        const RoleBackends& backends);

// ---------------------------------------------------------------------------
// Protocol helpers.
// ---------------------------------------------------------------------------

/// Labeled concatenation of peers' answers, one block per peer in agent-id
/// order: "Agent <id> answered: <answer>". The caller excludes the updating
/// agent's own answer. Empty input is an error.
std::string sync_peers(std::vector<std::pair<std::string, std::string>> peer_answers);

/// Trim, ASCII case-fold, and keep only the text after the last occurrence of
/// `marker` (when present).
std::string normalize_answer(std::string_view text, const std::string& marker);

struct MajorityResult {
    std::string answer;  // normalized form of the winning class
    bool tie = false;    // >= 2 classes share the maximal frequency
};

/// Most frequent answer after normalization; ties are broken by the earliest
/// first occurrence and reported via the flag.
MajorityResult aggregate_majority(const std::vector<std::string>& candidates,
                                  const std::string& marker = "FINAL:");

struct CostBreakdown {
    std::int64_t total = 0;
    std::map<std::string, std::int64_t> per_role;
    std::int64_t estimated_tokens = 0;
    double estimated_fraction = 0.0;
    bool any_local_estimate = false;
};

/// Exact integer sum of message token counts plus per-role subtotals.
CostBreakdown transcript_cost(const Transcript& t);

namespace roles {
inline constexpr const char* single = "single";
inline constexpr const char* planner = "planner";
inline constexpr const char* executor = "executor";
inline constexpr const char* reasoner = "reasoner";
inline constexpr const char* reviser = "reviser";
inline constexpr const char* debater = "debater";
inline constexpr const char* aggregator = "aggregator";
inline constexpr const char* affirmative = "affirmative";
inline constexpr const char* negative = "negative";
inline constexpr const char* judge = "judge";
}  // namespace roles

/// "debater-3" → "debater"; other names pass through.
std::string base_role(const std::string& role);

/// Base roles a paradigm involves, in protocol order.
std::vector<std::string> paradigm_roles(Paradigm p);

/// Conditioning-context builders shared between the workflow runners and the
/// role-isolation replays, so a substituted model sees byte-identical inputs.
namespace compose {
std::string executor_content(const TaskInstance& task, const std::string& plan);
std::string feedback_content(const TaskInstance& task, const std::string& initial);
std::string revision_content(const TaskInstance& task, const std::string& initial,
                             const std::string& feedback);
std::string single_revision_content(const TaskInstance& task, const std::string& initial);
std::string debate_update_content(const TaskInstance& task, const std::string& sync_block);
std::string aggregator_content(const TaskInstance& task,
                               std::vector<std::pair<std::string, std::string>> candidates);
std::string opponent_content(const TaskInstance& task, const std::string& opponent_argument);
std::string debate_judge_content(const TaskInstance& task, const std::string& transcript_block);
}  // namespace compose

}  // namespace parley
