#include "parley/roleiso.hpp"

#include <algorithm>
#include <ctime>

#include "parley/jsonl.hpp"

namespace parley::roleiso {

namespace {

std::string now_utc() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string key_of(const std::string& task_id, const std::string& role, int round) {
    return task_id + "\x1f" + role + "\x1f" + std::to_string(round);
}

std::string debater_id(int i) {
    return std::string(roles::debater) + "-" + std::to_string(i + 1);
}

}  // namespace

void validate_target(Paradigm workflow, const std::string& target_role) {
    const bool ok = (workflow == Paradigm::reflection && target_role == roles::reviser) ||
                    (workflow == Paradigm::interactive_debate &&
                     target_role == roles::aggregator) ||
                    (workflow == Paradigm::plan_execute && target_role == roles::planner);
    if (!ok)
        throw Error(ErrorKind::contract,
                    "role isolation supports reflection/reviser, interactive_debate/aggregator "
                    "and plan_execute/planner; got " +
                        std::string(to_string(workflow)) + "/" + target_role);
}

// ---------------------------------------------------------------------------
// ArtifactCache
// ---------------------------------------------------------------------------

ArtifactCache::ArtifactCache(std::filesystem::path dir, Paradigm workflow,
                             std::string reference_backend)
    : dir_(std::move(dir)), workflow_(workflow), reference_backend_(std::move(reference_backend)) {
    std::filesystem::create_directories(dir_);
    load();
}

std::filesystem::path ArtifactCache::file_for(const std::string& role) const {
    return dir_ / (std::string(to_string(workflow_)) + "." + role + ".jsonl");
}

void ArtifactCache::load() {
    const std::string prefix = std::string(to_string(workflow_)) + ".";
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (name.rfind(prefix, 0) != 0 || entry.path().extension() != ".jsonl") continue;
        for (const auto& rec : jsonl::read_file(entry.path())) {
            CachedArtifact a;
            a.task_id = rec.at("task_id").get<std::string>();
            a.role = rec.at("role").get<std::string>();
            a.round = rec.value("round", 0);
            a.content = rec.at("content").get<std::string>();
            a.tokens = rec.value("tokens", std::int64_t{0});
            a.usage_source = rec.value("usage", std::string("backend_reported")) ==
                                     "local_estimate"
                                 ? UsageSource::local_estimate
                                 : UsageSource::backend_reported;
            a.backend = rec.value("backend", std::string());
            a.created_at = rec.value("created_at", std::string());
            if (a.backend != reference_backend_) continue;  // different key space
            store_.emplace(key_of(a.task_id, a.role, a.round), std::move(a));
        }
    }
}

bool ArtifactCache::has(const std::string& task_id, const std::string& role, int round) const {
    return store_.count(key_of(task_id, role, round)) > 0;
}

const CachedArtifact& ArtifactCache::get(const std::string& task_id, const std::string& role,
                                         int round) const {
    auto it = store_.find(key_of(task_id, role, round));
    if (it == store_.end())
        throw Error(ErrorKind::contract,
                    "artifact cache miss for key (task '" + task_id + "', workflow '" +
                        to_string(workflow_) + "', role '" + role + "', round " +
                        std::to_string(round) + ", backend '" + reference_backend_ + "')");
    return it->second;
}

void ArtifactCache::put(CachedArtifact artifact) {
    std::string key = key_of(artifact.task_id, artifact.role, artifact.round);
    if (store_.count(key))
        throw Error(ErrorKind::contract, "artifact cache entry already exists; entries are "
                                         "write-once");
    jsonl::json rec;
    rec["task_id"] = artifact.task_id;
    rec["workflow"] = to_string(workflow_);
    rec["role"] = artifact.role;
    rec["round"] = artifact.round;
    rec["content"] = artifact.content;
    rec["tokens"] = artifact.tokens;
    rec["usage"] = to_string(artifact.usage_source);
    rec["backend"] = artifact.backend;
    rec["created_at"] = artifact.created_at;
    jsonl::append_line(file_for(artifact.role), rec);
    store_.emplace(std::move(key), std::move(artifact));
}

// ---------------------------------------------------------------------------
// Cache building
// ---------------------------------------------------------------------------

CacheBuildStats build_artifact_cache(const std::vector<TaskInstance>& tasks,
                                     const WorkflowConfig& cfg, const std::string& target_role,
                                     const BackendHandle& reference, ArtifactCache& cache) {
    validate_target(cfg.paradigm, target_role);
    if (cfg.paradigm == Paradigm::plan_execute)
        throw Error(ErrorKind::contract,
                    "plan_execute planner isolation uses a zero-temperature executor, not a "
                    "cache");
    if (cache.workflow() != cfg.paradigm)
        throw Error(ErrorKind::contract, "cache workflow does not match the config");

    CacheBuildStats stats;
    for (const TaskInstance& task : tasks) {
        try {
            if (cfg.paradigm == Paradigm::reflection) {
                if (!cache.has(task.id, roles::reasoner, 0)) {
                    CompletionRequest req;
                    req.system_prompt = cfg.prompt_for(roles::reasoner);
                    req.user_content = task.input;
                    req.decoding = cfg.decoding_for(roles::reasoner);
                    req.agent_id = roles::reasoner;
                    CompletionResult r = complete(req, reference);
                    stats.reference_calls += 1;
                    cache.put(CachedArtifact{task.id, roles::reasoner, 0, r.answer_text,
                                             r.completion_tokens, r.usage_source,
                                             reference->name(), now_utc()});
                }
            } else {
                // interactive debate: N initial answers plus N updates per round
                const int n = cfg.n_debaters;
                std::vector<std::string> answers(n);
                for (int round = 0; round <= cfg.rounds; ++round) {
                    const std::vector<std::string> prev = answers;
                    for (int i = 0; i < n; ++i) {
                        if (cache.has(task.id, debater_id(i), round)) {
                            answers[i] = cache.get(task.id, debater_id(i), round).content;
                            continue;
                        }
                        CompletionRequest req;
                        req.system_prompt = cfg.prompt_for(debater_id(i));
                        req.decoding = cfg.decoding_for(debater_id(i));
                        req.agent_id = debater_id(i);
                        if (round == 0) {
                            req.user_content = task.input;
                        } else {
                            std::vector<std::pair<std::string, std::string>> peers;
                            for (int j = 0; j < n; ++j)
                                if (j != i) peers.emplace_back(debater_id(j), prev[j]);
                            req.user_content =
                                compose::debate_update_content(task, sync_peers(std::move(peers)));
                        }
                        CompletionResult r = complete(req, reference);
                        stats.reference_calls += 1;
                        cache.put(CachedArtifact{task.id, debater_id(i), round, r.answer_text,
                                                 r.completion_tokens, r.usage_source,
                                                 reference->name(), now_utc()});
                        answers[i] = r.answer_text;
                    }
                }
            }
            stats.tasks_cached += 1;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::contract) throw;
            stats.tasks_skipped += 1;  // reference failure: task excluded downstream
        }
    }
    return stats;
}

// ---------------------------------------------------------------------------
// Isolated runs
// ---------------------------------------------------------------------------

namespace {

/// Minimal transcript assembly for replayed-plus-live runs.
struct IsolatedBuilder {
    Transcript t;
    bool first_call = true;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void replay(const CachedArtifact& artifact, MessageKind kind) {
        Message m;
        m.index = static_cast<int>(t.messages.size());
        m.agent_id = artifact.role;
        m.role = artifact.role;
        m.round = artifact.round;
        m.kind = kind;
        m.content = artifact.content;
        m.tokens = artifact.tokens;
        m.usage_source = artifact.usage_source;
        t.messages.push_back(std::move(m));
    }

    CompletionResult live(const BackendHandle& backend, const WorkflowConfig& cfg,
                          const std::string& role, int round, MessageKind kind,
                          const std::string& user_content,
                          std::optional<DecodingConfig> decoding_override = std::nullopt) {
        CompletionRequest req;
        req.system_prompt = cfg.prompt_for(role);
        req.user_content = user_content;
        req.decoding = decoding_override ? *decoding_override : cfg.decoding_for(role);
        req.agent_id = role;
        CompletionResult r = complete(req, backend);
        if (first_call) {
            t.query_prompt_tokens = r.prompt_tokens;
            first_call = false;
        }
        Message m;
        m.index = static_cast<int>(t.messages.size());
        m.agent_id = role;
        m.role = role;
        m.round = round;
        m.kind = kind;
        m.content = r.answer_text;
        m.reasoning = r.reasoning_text;
        m.tokens = r.completion_tokens;
        m.usage_source = r.usage_source;
        t.messages.push_back(std::move(m));
        return r;
    }

    Transcript finish(std::string final_answer) {
        t.final_answer = std::move(final_answer);
        t.total_cost = 0;
        for (const Message& m : t.messages) t.total_cost += m.tokens;
        t.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);
        return t;
    }
};

}  // namespace

Transcript run_role_isolated(const TaskInstance& task, const WorkflowConfig& cfg,
                             const std::string& target_role, const BackendHandle& evaluated,
                             const BackendHandle& reference_executor, const ArtifactCache* cache) {
    validate_target(cfg.paradigm, target_role);
    cfg.validate();

    IsolatedBuilder b;
    b.t.task_id = task.id;
    b.t.workflow = cfg;

    if (cfg.paradigm == Paradigm::plan_execute) {
        // no cache: the executor runs on the reference backend at temperature 0
        // so outcome differences are attributable to the planner alone
        CompletionResult plan =
            b.live(evaluated, cfg, roles::planner, 0, MessageKind::plan, task.input);
        if (plan.answer_text.find_first_not_of(" \t\r\n") == std::string::npos)
            throw Error(ErrorKind::parse, "task '" + task.id + "': degenerate plan");
        DecodingConfig exec_decoding = cfg.decoding_for(roles::executor);
        exec_decoding.temperature = 0.0;
        CompletionResult answer =
            b.live(reference_executor, cfg, roles::executor, 0, MessageKind::final_answer,
                   compose::executor_content(task, plan.answer_text), exec_decoding);
        return b.finish(answer.answer_text);
    }

    if (!cache) throw Error(ErrorKind::contract, "this isolation mode needs an artifact cache");

    if (cfg.paradigm == Paradigm::reflection) {
        const CachedArtifact& initial = cache->get(task.id, roles::reasoner, 0);
        b.replay(initial, MessageKind::candidate_answer);
        CompletionResult feedback =
            b.live(evaluated, cfg, roles::reviser, 0, MessageKind::feedback,
                   compose::feedback_content(task, initial.content));
        CompletionResult revised =
            b.live(evaluated, cfg, roles::reviser, 0, MessageKind::final_answer,
                   compose::revision_content(task, initial.content, feedback.answer_text));
        return b.finish(revised.answer_text);
    }

    // interactive debate, target aggregator: replay every debater message,
    // then one live aggregation over the cached final-round answers
    const int n = cfg.n_debaters;
    std::vector<std::pair<std::string, std::string>> finals;
    for (int round = 0; round <= cfg.rounds; ++round)
        for (int i = 0; i < n; ++i) {
            const CachedArtifact& a = cache->get(task.id, debater_id(i), round);
            b.replay(a, MessageKind::candidate_answer);
            if (round == cfg.rounds) finals.emplace_back(debater_id(i), a.content);
        }
    CompletionResult verdict =
        b.live(evaluated, cfg, roles::aggregator, cfg.rounds, MessageKind::verdict,
               compose::aggregator_content(task, finals));
    std::string final_answer = verdict.answer_text;
    bool fallback = false;
    if (final_answer.find_first_not_of(" \t\r\n") == std::string::npos) {
        std::vector<std::string> answers;
        for (auto& [_, content] : finals) answers.push_back(content);
        final_answer = aggregate_majority(answers, cfg.answer_marker).answer;
        fallback = true;
    }
    Transcript t = b.finish(final_answer);
    t.aggregator_fallback = fallback;
    return t;
}

bool cache_complete(const ArtifactCache& cache, const WorkflowConfig& cfg,
                    const TaskInstance& task) {
    if (cfg.paradigm == Paradigm::reflection) return cache.has(task.id, roles::reasoner, 0);
    if (cfg.paradigm == Paradigm::interactive_debate) {
        for (int round = 0; round <= cfg.rounds; ++round)
            for (int i = 0; i < cfg.n_debaters; ++i)
                if (!cache.has(task.id, debater_id(i), round)) return false;
        return true;
    }
    return true;  // plan_execute replays nothing
}

std::vector<RoleComparisonRow> compare_roles(
    const std::vector<std::pair<std::string, BackendHandle>>& models,
    const std::vector<TaskInstance>& tasks, const WorkflowConfig& cfg,
    const std::string& target_role, const BackendHandle& reference_executor,
    const ArtifactCache* cache, const BackendHandle& judge, const SandboxLimits& limits) {
    std::vector<RoleComparisonRow> rows;
    for (const auto& [name, handle] : models) {
        RoleComparisonRow row;
        row.model = name;
        for (const TaskInstance& task : tasks) {
            if (cache && !cache_complete(*cache, cfg, task))
                continue;  // skipped at cache-build time
            Transcript t =
                run_role_isolated(task, cfg, target_role, handle, reference_executor, cache);
            TaskScore s = score_task(task, t, judge, limits);
            row.n += 1;
            row.successes += s.score;
        }
        row.success_rate = row.n ? static_cast<double>(row.successes) / row.n : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace parley::roleiso
