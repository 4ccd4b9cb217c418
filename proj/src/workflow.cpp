#include "parley/workflow.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

#include "parley/prompts.hpp"

namespace parley {

const char* to_string(Domain d) {
    switch (d) {
        case Domain::math: return "math";
        case Domain::general: return "general";
        case Domain::code: return "code";
        case Domain::open_ended: return "open_ended";
    }
    return "general";
}

Domain domain_from_string(const std::string& s) {
    if (s == "math") return Domain::math;
    if (s == "general") return Domain::general;
    if (s == "code") return Domain::code;
    if (s == "open_ended") return Domain::open_ended;
    throw Error(ErrorKind::config, "unknown domain '" + s + "'");
}

const char* to_string(Paradigm p) {
    switch (p) {
        case Paradigm::single_direct: return "single_direct";
        case Paradigm::single_cot: return "single_cot";
        case Paradigm::plan_execute: return "plan_execute";
        case Paradigm::reflection: return "reflection";
        case Paradigm::interactive_debate: return "interactive_debate";
        case Paradigm::adversarial_debate: return "adversarial_debate";
    }
    return "single_direct";
}

Paradigm paradigm_from_string(const std::string& s) {
    if (s == "single_direct") return Paradigm::single_direct;
    if (s == "single_cot") return Paradigm::single_cot;
    if (s == "plan_execute") return Paradigm::plan_execute;
    if (s == "reflection") return Paradigm::reflection;
    if (s == "interactive_debate") return Paradigm::interactive_debate;
    if (s == "adversarial_debate") return Paradigm::adversarial_debate;
    throw Error(ErrorKind::config, "unknown paradigm '" + s + "'");
}

const char* to_string(AggregatorMode m) {
    return m == AggregatorMode::llm ? "llm" : "deterministic_majority";
}

AggregatorMode aggregator_mode_from_string(const std::string& s) {
    if (s == "llm") return AggregatorMode::llm;
    if (s == "deterministic_majority") return AggregatorMode::deterministic_majority;
    throw Error(ErrorKind::config, "unknown aggregator_mode '" + s + "'");
}

const char* to_string(MessageKind k) {
    switch (k) {
        case MessageKind::plan: return "plan";
        case MessageKind::feedback: return "feedback";
        case MessageKind::candidate_answer: return "candidate_answer";
        case MessageKind::rebuttal: return "rebuttal";
        case MessageKind::verdict: return "verdict";
        case MessageKind::reasoning: return "reasoning";
        case MessageKind::final_answer: return "final";
    }
    return "final";
}

MessageKind message_kind_from_string(const std::string& s) {
    if (s == "plan") return MessageKind::plan;
    if (s == "feedback") return MessageKind::feedback;
    if (s == "candidate_answer") return MessageKind::candidate_answer;
    if (s == "rebuttal") return MessageKind::rebuttal;
    if (s == "verdict") return MessageKind::verdict;
    if (s == "reasoning") return MessageKind::reasoning;
    if (s == "final") return MessageKind::final_answer;
    throw Error(ErrorKind::config, "unknown message kind '" + s + "'");
}

std::string base_role(const std::string& role) {
    auto dash = role.rfind('-');
    if (dash == std::string::npos) return role;
    bool digits = dash + 1 < role.size();
    for (std::size_t i = dash + 1; i < role.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(role[i]))) digits = false;
    return digits ? role.substr(0, dash) : role;
}

void TaskInstance::validate() const {
    if (id.empty()) throw Error(ErrorKind::config, "task has empty id");
    if (input.empty()) throw Error(ErrorKind::config, "task '" + id + "' has empty input");
    if (domain == Domain::code) {
        if (!test_suite || test_suite->cases.empty())
            throw Error(ErrorKind::config, "code task '" + id + "' needs a test suite");
    } else if (domain != Domain::open_ended && ground_truth.empty()) {
        throw Error(ErrorKind::config, "task '" + id + "' has empty ground truth");
    }
}

std::vector<std::string> paradigm_roles(Paradigm p) {
    switch (p) {
        case Paradigm::single_direct:
        case Paradigm::single_cot:
            return {roles::single};
        case Paradigm::plan_execute:
            return {roles::planner, roles::executor};
        case Paradigm::reflection:
            return {roles::reasoner, roles::reviser};
        case Paradigm::interactive_debate:
            return {roles::debater, roles::aggregator};
        case Paradigm::adversarial_debate:
            return {roles::affirmative, roles::negative, roles::judge};
    }
    return {};
}

void WorkflowConfig::validate() const {
    if (rounds < 0) throw Error(ErrorKind::config, "rounds must be >= 0");
    if (paradigm == Paradigm::interactive_debate && n_debaters < 2)
        throw Error(ErrorKind::config, "interactive_debate needs at least 2 debaters");
    for (const auto& [role, d] : decoding) {
        (void)role;
        d.validate();
    }
    for (const std::string& role : paradigm_roles(paradigm)) {
        if (prompt_for(role).empty())
            throw Error(ErrorKind::config, "no prompt for role '" + role + "'");
    }
}

std::string WorkflowConfig::prompt_for(const std::string& role) const {
    if (auto it = role_prompts.find(role); it != role_prompts.end()) return it->second;
    std::string base = base_role(role);
    if (auto it = role_prompts.find(base); it != role_prompts.end()) return it->second;
    return prompts::default_role_prompt(base);
}

DecodingConfig WorkflowConfig::decoding_for(const std::string& role) const {
    if (auto it = decoding.find(role); it != decoding.end()) return it->second;
    std::string base = base_role(role);
    if (auto it = decoding.find(base); it != decoding.end()) return it->second;
    if (auto it = decoding.find("*"); it != decoding.end()) return it->second;
    return DecodingConfig{};
}

// ---------------------------------------------------------------------------
// Protocol helpers
// ---------------------------------------------------------------------------

namespace {

// Numeric-aware ordering so debater-10 sorts after debater-2.
bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        unsigned char ca = a[i], cb = b[j];
        if (std::isdigit(ca) && std::isdigit(cb)) {
            std::size_t ia = i, jb = j;
            while (ia < a.size() && std::isdigit(static_cast<unsigned char>(a[ia]))) ++ia;
            while (jb < b.size() && std::isdigit(static_cast<unsigned char>(b[jb]))) ++jb;
            auto na = a.substr(i, ia - i), nb = b.substr(j, jb - j);
            auto trim0 = [](std::string s) {
                auto p = s.find_first_not_of('0');
                return p == std::string::npos ? std::string("0") : s.substr(p);
            };
            na = trim0(na);
            nb = trim0(nb);
            if (na.size() != nb.size()) return na.size() < nb.size();
            if (na != nb) return na < nb;
            i = ia;
            j = jb;
        } else {
            if (ca != cb) return ca < cb;
            ++i;
            ++j;
        }
    }
    return a.size() - i < b.size() - j;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

std::string sync_peers(std::vector<std::pair<std::string, std::string>> peer_answers) {
    if (peer_answers.empty())
        throw Error(ErrorKind::contract, "sync_peers needs at least one peer answer");
    std::sort(peer_answers.begin(), peer_answers.end(),
              [](const auto& a, const auto& b) { return natural_less(a.first, b.first); });
    std::string out;
    for (std::size_t i = 0; i < peer_answers.size(); ++i) {
        if (i) out += '\n';
        out += "Agent " + peer_answers[i].first + " answered: " + peer_answers[i].second;
    }
    return out;
}

std::string normalize_answer(std::string_view text, const std::string& marker) {
    std::string s(text);
    if (!marker.empty()) {
        auto pos = s.rfind(marker);
        if (pos != std::string::npos) s = s.substr(pos + marker.size());
    }
    s = trim(s);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

MajorityResult aggregate_majority(const std::vector<std::string>& candidates,
                                  const std::string& marker) {
    if (candidates.empty())
        throw Error(ErrorKind::contract, "aggregate_majority needs at least one candidate");
    struct ClassInfo {
        int count = 0;
        std::size_t first = 0;
    };
    std::map<std::string, ClassInfo> classes;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        std::string norm = normalize_answer(candidates[i], marker);
        auto [it, fresh] = classes.try_emplace(norm, ClassInfo{0, i});
        it->second.count += 1;
        (void)fresh;
    }
    int best = 0;
    for (const auto& [_, info] : classes) best = std::max(best, info.count);
    int at_max = 0;
    const std::string* winner = nullptr;
    std::size_t winner_first = candidates.size();
    for (const auto& [norm, info] : classes) {
        if (info.count == best) {
            ++at_max;
            if (info.first < winner_first) {
                winner_first = info.first;
                winner = &norm;
            }
        }
    }
    return MajorityResult{*winner, at_max >= 2};
}

CostBreakdown transcript_cost(const Transcript& t) {
    CostBreakdown c;
    for (const Message& m : t.messages) {
        c.total += m.tokens;
        c.per_role[m.role] += m.tokens;
        if (m.usage_source == UsageSource::local_estimate) {
            c.estimated_tokens += m.tokens;
            c.any_local_estimate = true;
        }
    }
    c.estimated_fraction =
        c.total > 0 ? static_cast<double>(c.estimated_tokens) / static_cast<double>(c.total) : 0.0;
    return c;
}

// ---------------------------------------------------------------------------
// Transcript construction
// ---------------------------------------------------------------------------

namespace {

class TranscriptBuilder {
public:
    TranscriptBuilder(const TaskInstance& task, const WorkflowConfig& cfg)
        : start_(std::chrono::steady_clock::now()) {
        t_.task_id = task.id;
        t_.workflow = cfg;
    }

    CompletionResult call(const BackendHandle& backend, const std::string& role,
                          const std::string& agent_id, int round, MessageKind kind,
                          const std::string& user_content) {
        return call(backend, role, agent_id, round, kind, user_content,
                    t_.workflow.decoding_for(role));
    }

    CompletionResult call(const BackendHandle& backend, const std::string& role,
                          const std::string& agent_id, int round, MessageKind kind,
                          const std::string& user_content, const DecodingConfig& decoding) {
        CompletionResult result = raw_call(backend, role, agent_id, user_content, decoding);
        Message m;
        m.agent_id = agent_id;
        m.role = role;
        m.round = round;
        m.kind = kind;
        m.content = result.answer_text;
        m.reasoning = result.reasoning_text;
        m.tokens = result.completion_tokens;
        m.usage_source = result.usage_source;
        append(std::move(m));
        return result;
    }

    // Runs the request without appending a message; the caller shapes the
    // messages itself (single_cot's reasoning/final split).
    CompletionResult raw_call(const BackendHandle& backend, const std::string& role,
                              const std::string& agent_id, const std::string& user_content,
                              const DecodingConfig& decoding) {
        CompletionRequest req;
        req.system_prompt = t_.workflow.prompt_for(role);
        req.user_content = user_content;
        req.decoding = decoding;
        req.agent_id = agent_id;
        try {
            CompletionResult result = complete(req, backend);
            if (first_call_) {
                t_.query_prompt_tokens = result.prompt_tokens;
                first_call_ = false;
            }
            return result;
        } catch (const Error& e) {
            fail(std::string(e.what()), e.kind());
        }
    }

    void append(Message m) {
        m.index = static_cast<int>(t_.messages.size());
        t_.messages.push_back(std::move(m));
    }

    [[noreturn]] void fail(const std::string& why, ErrorKind kind = ErrorKind::transport) {
        t_.failed = true;
        t_.failure = why;
        throw WorkflowError("task '" + t_.task_id + "': " + why, finish(""), kind);
    }

    Transcript finish(std::string final_answer) {
        t_.final_answer = std::move(final_answer);
        t_.total_cost = 0;
        for (const Message& m : t_.messages) t_.total_cost += m.tokens;
        t_.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start_);
        return t_;
    }

    const Transcript& partial() const { return t_; }

private:
    Transcript t_;
    bool first_call_ = true;
    std::chrono::steady_clock::time_point start_;
};

void require_paradigm(const WorkflowConfig& cfg, std::initializer_list<Paradigm> allowed) {
    for (Paradigm p : allowed)
        if (cfg.paradigm == p) return;
    throw Error(ErrorKind::contract,
                std::string("workflow config has paradigm '") + to_string(cfg.paradigm) +
                    "', which this runner does not handle");
}

std::string problem_block(const TaskInstance& task) { return "Problem:\n" + task.input; }

}  // namespace

namespace compose {

std::string executor_content(const TaskInstance& task, const std::string& plan) {
    return problem_block(task) + "\n\nPlan:\n" + plan;
}

std::string feedback_content(const TaskInstance& task, const std::string& initial) {
    return problem_block(task) + "\n\nProposed solution:\n" + initial +
           "\n\nGive concrete feedback on the proposed solution.";
}

std::string revision_content(const TaskInstance& task, const std::string& initial,
                             const std::string& feedback) {
    return problem_block(task) + "\n\nProposed solution:\n" + initial + "\n\nFeedback:\n" +
           feedback + "\n\nRevise the solution accordingly.";
}

std::string single_revision_content(const TaskInstance& task, const std::string& initial) {
    return problem_block(task) + "\n\nProposed solution:\n" + initial +
           "\n\nCritique the proposed solution and produce a revised solution.";
}

std::string debate_update_content(const TaskInstance& task, const std::string& sync_block) {
    return problem_block(task) + "\n\nYour peers' answers from the previous round:\n" +
           sync_block + "\n\nReconsider and give your updated answer.";
}

std::string aggregator_content(const TaskInstance& task,
                               std::vector<std::pair<std::string, std::string>> candidates) {
    return problem_block(task) + "\n\nCandidate answers:\n" + sync_peers(std::move(candidates)) +
           "\n\nSelect the most frequently supported answer.";
}

std::string opponent_content(const TaskInstance& task, const std::string& opponent_argument) {
    return problem_block(task) + "\n\nOpponent's argument:\n" + opponent_argument;
}

std::string debate_judge_content(const TaskInstance& task, const std::string& transcript_block) {
    return problem_block(task) + "\n\nDebate transcript:\n" + transcript_block;
}

}  // namespace compose

// ---------------------------------------------------------------------------
// Single-model paradigms
// ---------------------------------------------------------------------------

Transcript run_single_model(const TaskInstance& task, const WorkflowConfig& cfg,
                            const BackendHandle& backend) {
    require_paradigm(cfg, {Paradigm::single_direct, Paradigm::single_cot});
    cfg.validate();
    TranscriptBuilder b(task, cfg);

    DecodingConfig decoding = cfg.decoding_for(roles::single);
    decoding.strategy = cfg.paradigm == Paradigm::single_cot ? Strategy::adaptive_reasoning
                                                             : Strategy::direct_response;

    CompletionResult result =
        b.raw_call(backend, roles::single, roles::single, task.input, decoding);

    if (cfg.paradigm == Paradigm::single_cot && result.reasoning_text &&
        !result.reasoning_text->empty()) {
        // One generation produced (z, y): keep the reported total exact and
        // flag the estimated reasoning share.
        std::int64_t z_tokens =
            std::min(estimate_tokens(*result.reasoning_text), result.completion_tokens);
        Message z;
        z.agent_id = roles::single;
        z.role = roles::single;
        z.kind = MessageKind::reasoning;
        z.content = *result.reasoning_text;
        z.tokens = z_tokens;
        z.usage_source = UsageSource::local_estimate;
        b.append(std::move(z));

        Message y;
        y.agent_id = roles::single;
        y.role = roles::single;
        y.kind = MessageKind::final_answer;
        y.content = result.answer_text;
        y.tokens = result.completion_tokens - z_tokens;
        y.usage_source = result.usage_source;
        b.append(std::move(y));
    } else {
        Message y;
        y.agent_id = roles::single;
        y.role = roles::single;
        y.kind = MessageKind::final_answer;
        y.content = result.answer_text;
        y.tokens = result.completion_tokens;
        y.usage_source = result.usage_source;
        b.append(std::move(y));
    }
    return b.finish(result.answer_text);
}

// ---------------------------------------------------------------------------
// Plan-and-Execute
// ---------------------------------------------------------------------------

Transcript run_plan_execute(const TaskInstance& task, const WorkflowConfig& cfg,
                            const BackendHandle& planner, const BackendHandle& executor) {
    require_paradigm(cfg, {Paradigm::plan_execute});
    cfg.validate();
    TranscriptBuilder b(task, cfg);

    CompletionResult plan =
        b.call(planner, roles::planner, roles::planner, 0, MessageKind::plan, task.input);
    if (is_blank(plan.answer_text)) b.fail("degenerate plan (planner produced no text)",
                                           ErrorKind::parse);

    CompletionResult answer =
        b.call(executor, roles::executor, roles::executor, 0, MessageKind::final_answer,
               compose::executor_content(task, plan.answer_text));
    return b.finish(answer.answer_text);
}

// ---------------------------------------------------------------------------
// Reflection
// ---------------------------------------------------------------------------

Transcript run_reflection(const TaskInstance& task, const WorkflowConfig& cfg,
                          const BackendHandle& reasoner, const BackendHandle& reviser) {
    require_paradigm(cfg, {Paradigm::reflection});
    cfg.validate();
    TranscriptBuilder b(task, cfg);

    CompletionResult initial = b.call(reasoner, roles::reasoner, roles::reasoner, 0,
                                      MessageKind::candidate_answer, task.input);

    if (cfg.reflection_single_call) {
        CompletionResult revised =
            b.call(reviser, roles::reviser, roles::reviser, 0, MessageKind::final_answer,
                   compose::single_revision_content(task, initial.answer_text));
        return b.finish(revised.answer_text);
    }

    CompletionResult feedback =
        b.call(reviser, roles::reviser, roles::reviser, 0, MessageKind::feedback,
               compose::feedback_content(task, initial.answer_text));

    CompletionResult revised =
        b.call(reviser, roles::reviser, roles::reviser, 0, MessageKind::final_answer,
               compose::revision_content(task, initial.answer_text, feedback.answer_text));
    return b.finish(revised.answer_text);
}

// ---------------------------------------------------------------------------
// Interactive Debate
// ---------------------------------------------------------------------------

namespace {
std::string debater_id(int i) { return std::string(roles::debater) + "-" + std::to_string(i + 1); }
}  // namespace

Transcript run_interactive_debate(const TaskInstance& task, const WorkflowConfig& cfg,
                                  const std::vector<BackendHandle>& debaters,
                                  const BackendHandle& aggregator) {
    require_paradigm(cfg, {Paradigm::interactive_debate});
    cfg.validate();
    const int n = cfg.n_debaters;
    if (static_cast<int>(debaters.size()) != n)
        throw Error(ErrorKind::contract,
                    "interactive debate configured for " + std::to_string(n) + " debaters, got " +
                        std::to_string(debaters.size()) + " backends");

    TranscriptBuilder b(task, cfg);

    std::vector<std::string> answers(n);
    for (int i = 0; i < n; ++i) {
        CompletionResult r = b.call(debaters[i], debater_id(i), debater_id(i), 0,
                                    MessageKind::candidate_answer, task.input);
        answers[i] = r.answer_text;
    }

    for (int round = 1; round <= cfg.rounds; ++round) {
        // Strict round barrier: every update this round conditions on the
        // previous round's snapshot only.
        const std::vector<std::string> prev = answers;
        for (int i = 0; i < n; ++i) {
            std::vector<std::pair<std::string, std::string>> peers;
            for (int j = 0; j < n; ++j)
                if (j != i) peers.emplace_back(debater_id(j), prev[j]);
            CompletionResult r =
                b.call(debaters[i], debater_id(i), debater_id(i), round,
                       MessageKind::candidate_answer,
                       compose::debate_update_content(task, sync_peers(std::move(peers))));
            answers[i] = r.answer_text;
        }
    }

    std::string final_answer;
    bool fallback = false;
    if (cfg.aggregator_mode == AggregatorMode::llm) {
        std::vector<std::pair<std::string, std::string>> all;
        for (int i = 0; i < n; ++i) all.emplace_back(debater_id(i), answers[i]);
        CompletionResult verdict =
            b.call(aggregator, roles::aggregator, roles::aggregator, cfg.rounds,
                   MessageKind::verdict, compose::aggregator_content(task, std::move(all)));
        if (is_blank(verdict.answer_text)) {
            fallback = true;
            final_answer = aggregate_majority(answers, cfg.answer_marker).answer;
        } else {
            final_answer = verdict.answer_text;
        }
    } else {
        final_answer = aggregate_majority(answers, cfg.answer_marker).answer;
        Message verdict;
        verdict.agent_id = roles::aggregator;
        verdict.role = roles::aggregator;
        verdict.round = cfg.rounds;
        verdict.kind = MessageKind::verdict;
        verdict.content = final_answer;
        verdict.tokens = 0;  // derived locally, not a generation
        verdict.usage_source = UsageSource::local_estimate;
        b.append(std::move(verdict));
    }

    Transcript t = b.finish(final_answer);
    t.aggregator_fallback = fallback;
    return t;
}

// ---------------------------------------------------------------------------
// Adversarial Debate
// ---------------------------------------------------------------------------

Transcript run_adversarial_debate(const TaskInstance& task, const WorkflowConfig& cfg,
                                  const BackendHandle& affirmative, const BackendHandle& negative,
                                  const BackendHandle& judge) {
    require_paradigm(cfg, {Paradigm::adversarial_debate});
    cfg.validate();
    TranscriptBuilder b(task, cfg);

    struct Turn {
        std::string side;
        int round;
        std::string content;
    };
    std::vector<Turn> turns;

    CompletionResult aff = b.call(affirmative, roles::affirmative, roles::affirmative, 0,
                                  MessageKind::candidate_answer, task.input);
    turns.push_back({roles::affirmative, 0, aff.answer_text});

    CompletionResult neg =
        b.call(negative, roles::negative, roles::negative, 0, MessageKind::candidate_answer,
               compose::opponent_content(task, aff.answer_text));
    turns.push_back({roles::negative, 0, neg.answer_text});

    std::string last_neg = neg.answer_text;
    for (int round = 1; round <= cfg.rounds; ++round) {
        CompletionResult a =
            b.call(affirmative, roles::affirmative, roles::affirmative, round,
                   MessageKind::rebuttal, compose::opponent_content(task, last_neg));
        turns.push_back({roles::affirmative, round, a.answer_text});

        CompletionResult g =
            b.call(negative, roles::negative, roles::negative, round, MessageKind::rebuttal,
                   compose::opponent_content(task, a.answer_text));
        turns.push_back({roles::negative, round, g.answer_text});
        last_neg = g.answer_text;
    }

    std::string transcript_block;
    for (const Turn& turn : turns) {
        transcript_block += (turn.side == roles::affirmative ? "Affirmative (round "
                                                             : "Negative (round ") +
                            std::to_string(turn.round) + "):\n" + turn.content + "\n\n";
    }
    CompletionResult verdict =
        b.call(judge, roles::judge, roles::judge, cfg.rounds, MessageKind::verdict,
               compose::debate_judge_content(task, transcript_block));
    return b.finish(verdict.answer_text);
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

namespace {

BackendHandle backend_for(const RoleBackends& backends, const std::string& role) {
    if (auto it = backends.find(role); it != backends.end()) return it->second;
    if (auto it = backends.find(base_role(role)); it != backends.end()) return it->second;
    if (auto it = backends.find("*"); it != backends.end()) return it->second;
    throw Error(ErrorKind::config, "no backend for role '" + role + "'");
}

}  // namespace

Transcript run_workflow(const TaskInstance& task, const WorkflowConfig& cfg,
                        const RoleBackends& backends) {
    switch (cfg.paradigm) {
        case Paradigm::single_direct:
        case Paradigm::single_cot:
            return run_single_model(task, cfg, backend_for(backends, roles::single));
        case Paradigm::plan_execute:
            return run_plan_execute(task, cfg, backend_for(backends, roles::planner),
                                    backend_for(backends, roles::executor));
        case Paradigm::reflection:
            return run_reflection(task, cfg, backend_for(backends, roles::reasoner),
                                  backend_for(backends, roles::reviser));
        case Paradigm::interactive_debate: {
            std::vector<BackendHandle> debaters;
            for (int i = 0; i < cfg.n_debaters; ++i)
                debaters.push_back(backend_for(backends, debater_id(i)));
            return run_interactive_debate(task, cfg, debaters,
                                          backend_for(backends, roles::aggregator));
        }
        case Paradigm::adversarial_debate:
            return run_adversarial_debate(task, cfg, backend_for(backends, roles::affirmative),
                                          backend_for(backends, roles::negative),
                                          backend_for(backends, roles::judge));
    }
    throw Error(ErrorKind::internal, "unhandled paradigm");
}

}  // namespace parley
