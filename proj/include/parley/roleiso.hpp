#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parley/backend.hpp"
#include "parley/judging.hpp"
#include "parley/workflow.hpp"

namespace parley::roleiso {

/// One cached non-target-role artifact. Keyed by (task, workflow, role,
/// round); content is write-once.
struct CachedArtifact {
    std::string task_id;
    std::string role;
    int round = 0;
    std::string content;
    std::int64_t tokens = 0;
    UsageSource usage_source = UsageSource::backend_reported;
    std::string backend;     // reference backend name
    std::string created_at;  // ISO 8601 UTC
};

/// Write-once artifact store persisted as one line-delimited file per
/// (workflow, role) under a cache directory. Reads are lock-free after the
/// build phase completes.
class ArtifactCache {
public:
    ArtifactCache(std::filesystem::path dir, Paradigm workflow, std::string reference_backend);

    bool has(const std::string& task_id, const std::string& role, int round) const;
    /// Throws Error(contract) naming the full key on a miss.
    const CachedArtifact& get(const std::string& task_id, const std::string& role, int round) const;
    /// Persists immediately (append). Overwriting an existing key is an error.
    void put(CachedArtifact artifact);

    std::size_t size() const { return store_.size(); }
    Paradigm workflow() const { return workflow_; }
    const std::string& reference_backend() const { return reference_backend_; }

private:
    std::filesystem::path file_for(const std::string& role) const;
    void load();

    std::filesystem::path dir_;
    Paradigm workflow_;
    std::string reference_backend_;
    std::map<std::string, CachedArtifact> store_;  // "task\x1frole\x1fround"
};

struct CacheBuildStats {
    int tasks_cached = 0;
    int tasks_skipped = 0;    // reference backend failed; excluded downstream
    int reference_calls = 0;  // new calls this build (0 on a warm cache)
};

/// Generates every non-target-role artifact once with the reference backend:
/// the initial solution for reflection, the full debater exchange for
/// interactive debate. Idempotent; warm entries are not regenerated.
CacheBuildStats build_artifact_cache(const std::vector<TaskInstance>& tasks,
                                     const WorkflowConfig& cfg, const std::string& target_role,
                                     const BackendHandle& reference, ArtifactCache& cache);

/// Runs one task with the evaluated backend substituted into exactly the
/// target role; every other role's message replays from the cache. For
/// plan_execute planner isolation there is no cache: the executor runs on the
/// reference backend at temperature 0.
Transcript run_role_isolated(const TaskInstance& task, const WorkflowConfig& cfg,
                             const std::string& target_role, const BackendHandle& evaluated,
                             const BackendHandle& reference_executor,
                             const ArtifactCache* cache);

struct RoleComparisonRow {
    std::string model;
    int n = 0;
    int successes = 0;
    double success_rate = 0.0;
};

/// Scores each model under the isolated role on the shared cache; rows come
/// back in input order.
std::vector<RoleComparisonRow> compare_roles(
    const std::vector<std::pair<std::string, BackendHandle>>& models,
    const std::vector<TaskInstance>& tasks, const WorkflowConfig& cfg,
    const std::string& target_role, const BackendHandle& reference_executor,
    const ArtifactCache* cache, const BackendHandle& judge, const SandboxLimits& limits);

/// Roles with isolation support, per workflow: reflection/reviser,
/// interactive_debate/aggregator, plan_execute/planner.
void validate_target(Paradigm workflow, const std::string& target_role);

/// True when every artifact the isolated run will replay is present; tasks the
/// cache build skipped fail this and are excluded from comparisons.
bool cache_complete(const ArtifactCache& cache, const WorkflowConfig& cfg,
                    const TaskInstance& task);

}  // namespace parley::roleiso
