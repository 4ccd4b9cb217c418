#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "parley/analytics.hpp"
#include "parley/config.hpp"
#include "parley/mime.hpp"

namespace parley {

/// Batch orchestration over a loaded config: workflow runs, scoring,
/// persistence, resume, re-judging, role isolation, and reporting.
///
/// Run layout: <output_dir>/<workflow>__<dataset>/
///   run.json                resolved run manifest
///   transcripts/<task>.json one record per task (written last, so a task is
///   verdicts/<task>.json    resumed iff any of its three files is missing)
///   costs/<task>.json
class Runner {
public:
    explicit Runner(RunConfig config);

    const RunConfig& config() const { return config_; }

    /// Runs every not-yet-persisted task of the dataset through the workflow,
    /// scores it, and persists transcript/verdict/cost. Task failures are
    /// recorded as data; only infrastructure problems throw.
    void run_benchmark(const std::string& workflow_name, const std::string& dataset_name);

    /// Re-scores every transcript in an existing run directory and rewrites
    /// verdicts and cost-record success bits.
    void rejudge(const std::filesystem::path& run_dir);

    mime::Report run_mime(const std::filesystem::path& items_path, const std::string& evaluated,
                          const std::string& criteria, const std::string& judge);

    /// Role-isolation spec file: {workflow, target_role, reference, evaluated[],
    /// dataset, cache_dir, n_debaters?, rounds?}. Builds/loads the shared cache
    /// and writes the comparison table.
    void run_roles(const std::filesystem::path& spec_path);

    /// Aggregates every cost record found under runs_dir and emits report
    /// files there; returns the rendered text table.
    std::string report(const std::filesystem::path& runs_dir, analytics::ReportFormat format);

    /// Opens (and caches) the named backend.
    BackendHandle backend(const std::string& name);

    std::filesystem::path run_dir(const std::string& workflow_name,
                                  const std::string& dataset_name) const;

private:
    void run_one_task(const TaskInstance& task, const WorkflowEntry& entry,
                      const std::string& workflow_name, const std::filesystem::path& dir,
                      const BackendHandle& judge);
    RoleBackends resolve_role_backends(const WorkflowEntry& entry);

    RunConfig config_;
    std::mutex backends_mu_;
    std::map<std::string, BackendHandle> backends_;
};

}  // namespace parley
