#include "parley/runner.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>
#include <tuple>

#include "parley/roleiso.hpp"
#include "parley/serialize.hpp"

namespace parley {

using jsonl::json;

namespace {

analytics::CostRecord make_cost_record(const Transcript& t, const std::string& workflow_name,
                                       int success) {
    CostBreakdown cost = transcript_cost(t);
    analytics::CostRecord r;
    r.task_id = t.task_id;
    r.workflow = workflow_name;
    r.total_tokens = cost.total;
    r.per_role_tokens = cost.per_role;
    r.query_length_tokens = t.query_prompt_tokens;
    r.success = success;
    r.wall_time = t.wall_time;
    r.estimated_fraction = cost.estimated_fraction;
    return r;
}

}  // namespace

Runner::Runner(RunConfig config) : config_(std::move(config)) {}

BackendHandle Runner::backend(const std::string& name) {
    std::lock_guard<std::mutex> lock(backends_mu_);
    if (auto it = backends_.find(name); it != backends_.end()) return it->second;
    auto spec = config_.backends.find(name);
    if (spec == config_.backends.end())
        throw Error(ErrorKind::config, "unknown backend '" + name + "'");
    BackendHandle handle = open_backend(spec->second, config_.base_dir);
    backends_[name] = handle;
    return handle;
}

std::filesystem::path Runner::run_dir(const std::string& workflow_name,
                                      const std::string& dataset_name) const {
    return config_.output_dir / (workflow_name + "__" + dataset_name);
}

RoleBackends Runner::resolve_role_backends(const WorkflowEntry& entry) {
    RoleBackends resolved;
    for (const auto& [role, name] : entry.role_backends) resolved[role] = backend(name);
    return resolved;
}

void Runner::run_one_task(const TaskInstance& task, const WorkflowEntry& entry,
                          const std::string& workflow_name, const std::filesystem::path& dir,
                          const BackendHandle& judge) {
    const auto transcript_path = dir / "transcripts" / (task.id + ".json");
    const auto verdict_path = dir / "verdicts" / (task.id + ".json");
    const auto cost_path = dir / "costs" / (task.id + ".json");
    if (std::filesystem::exists(transcript_path) && std::filesystem::exists(verdict_path) &&
        std::filesystem::exists(cost_path))
        return;  // resume: already persisted

    Transcript transcript;
    json verdict;
    int success = 0;
    try {
        transcript = run_workflow(task, entry.config, resolve_role_backends(entry));
        try {
            TaskScore score = score_task(task, transcript, judge, config_.sandbox);
            success = score.score;
            verdict = to_json(score, task.id, task.domain);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::sandbox || e.kind() == ErrorKind::config) throw;
            verdict["task_id"] = task.id;
            verdict["domain"] = to_string(task.domain);
            verdict["score"] = 0;
            verdict["method"] = "judge_error";
            verdict["error"] = e.what();
        }
    } catch (const WorkflowError& e) {
        transcript = e.partial();
        verdict["task_id"] = task.id;
        verdict["domain"] = to_string(task.domain);
        verdict["score"] = 0;
        verdict["method"] = "workflow_failure";
        verdict["error"] = e.what();
    }

    // transcript written last: a task counts as done only when all three exist
    jsonl::write_text(cost_path,
                      to_json(make_cost_record(transcript, workflow_name, success)).dump() + "\n");
    jsonl::write_text(verdict_path, verdict.dump() + "\n");
    jsonl::write_text(transcript_path, to_json(transcript).dump() + "\n");
}

void Runner::run_benchmark(const std::string& workflow_name, const std::string& dataset_name) {
    auto wf = config_.workflows.find(workflow_name);
    if (wf == config_.workflows.end())
        throw Error(ErrorKind::config, "unknown workflow '" + workflow_name + "'");
    auto ds = config_.datasets.find(dataset_name);
    if (ds == config_.datasets.end())
        throw Error(ErrorKind::config, "unknown dataset '" + dataset_name + "'");

    std::filesystem::path dataset_path = ds->second;
    if (dataset_path.is_relative() && !config_.base_dir.empty())
        dataset_path = config_.base_dir / dataset_path;
    std::vector<TaskInstance> tasks = load_dataset(dataset_path, dataset_name);
    if (config_.shuffle_tasks) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(config_.seed));
        std::shuffle(tasks.begin(), tasks.end(), rng);
    }

    const std::filesystem::path dir = run_dir(workflow_name, dataset_name);
    std::filesystem::create_directories(dir / "transcripts");
    std::filesystem::create_directories(dir / "verdicts");
    std::filesystem::create_directories(dir / "costs");

    json manifest;
    manifest["workflow"] = workflow_name;
    manifest["dataset"] = dataset_name;
    manifest["dataset_path"] = dataset_path.string();
    manifest["config"] = to_json(wf->second.config);
    manifest["seed"] = config_.seed;
    jsonl::write_text(dir / "run.json", manifest.dump(2) + "\n");

    BackendHandle judge = backend(config_.judge);

    const int workers = std::min<int>(config_.concurrency_limit, static_cast<int>(tasks.size()));
    if (workers <= 1) {
        for (const TaskInstance& task : tasks)
            run_one_task(task, wf->second, workflow_name, dir, judge);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr first_error;
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                run_one_task(tasks[i], wf->second, workflow_name, dir, judge);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

void Runner::rejudge(const std::filesystem::path& run_dir) {
    const auto manifest_path = run_dir / "run.json";
    if (!std::filesystem::exists(manifest_path))
        throw Error(ErrorKind::io, "no run.json under " + run_dir.string());
    json manifest = json::parse(jsonl::read_text(manifest_path));
    const std::string workflow_name = manifest.at("workflow").get<std::string>();
    std::vector<TaskInstance> tasks =
        load_dataset(manifest.at("dataset_path").get<std::string>(),
                     manifest.at("dataset").get<std::string>());
    std::map<std::string, const TaskInstance*> by_id;
    for (const TaskInstance& t : tasks) by_id[t.id] = &t;

    BackendHandle judge = backend(config_.judge);
    for (const auto& entry : std::filesystem::directory_iterator(run_dir / "transcripts")) {
        if (!entry.is_regular_file()) continue;
        Transcript transcript = transcript_from_json(json::parse(jsonl::read_text(entry.path())));
        auto it = by_id.find(transcript.task_id);
        if (it == by_id.end())
            throw Error(ErrorKind::io, "transcript '" + transcript.task_id +
                                           "' has no task in the dataset");
        json verdict;
        int success = 0;
        if (transcript.failed) {
            verdict["task_id"] = transcript.task_id;
            verdict["domain"] = to_string(it->second->domain);
            verdict["score"] = 0;
            verdict["method"] = "workflow_failure";
            verdict["error"] = transcript.failure;
        } else {
            TaskScore score = score_task(*it->second, transcript, judge, config_.sandbox);
            success = score.score;
            verdict = to_json(score, transcript.task_id, it->second->domain);
        }
        jsonl::write_text(run_dir / "verdicts" / (transcript.task_id + ".json"),
                          verdict.dump() + "\n");
        jsonl::write_text(
            run_dir / "costs" / (transcript.task_id + ".json"),
            to_json(make_cost_record(transcript, workflow_name, success)).dump() + "\n");
    }
}

mime::Report Runner::run_mime(const std::filesystem::path& items_path,
                              const std::string& evaluated, const std::string& criteria,
                              const std::string& judge) {
    std::string evaluated_name = evaluated.empty() ? config_.mime_evaluated : evaluated;
    std::string criteria_name = criteria.empty() ? config_.mime_criteria : criteria;
    std::string judge_name = judge.empty() ? config_.judge : judge;
    if (evaluated_name.empty() || criteria_name.empty())
        throw Error(ErrorKind::config,
                    "mime needs evaluated and criteria backends (flags or config mime section)");

    std::filesystem::path path = items_path;
    if (path.is_relative() && !config_.base_dir.empty() && !std::filesystem::exists(path))
        path = config_.base_dir / path;
    std::vector<mime::Item> items = mime::load_items(path);
    mime::Report report =
        mime::evaluate_dataset(items, backend(evaluated_name), backend(criteria_name),
                               backend(judge_name), config_.mime_weights);
    const auto out_dir = config_.output_dir / ("mime__" + path.stem().string());
    std::filesystem::create_directories(out_dir);
    mime::write_report(report, out_dir / "report.json");
    return report;
}

void Runner::run_roles(const std::filesystem::path& spec_path) {
    json spec = json::parse(jsonl::read_text(spec_path));
    WorkflowConfig cfg;
    cfg.paradigm = paradigm_from_string(spec.at("workflow").get<std::string>());
    if (spec.contains("n_debaters")) cfg.n_debaters = spec["n_debaters"].get<int>();
    if (spec.contains("rounds")) cfg.rounds = spec["rounds"].get<int>();
    if (spec.contains("role_prompts"))
        for (const auto& [role, prompt] : spec["role_prompts"].items())
            cfg.role_prompts[role] = prompt.get<std::string>();
    const std::string target_role = spec.at("target_role").get<std::string>();
    roleiso::validate_target(cfg.paradigm, target_role);

    const std::string reference_name = spec.at("reference").get<std::string>();
    BackendHandle reference = backend(reference_name);

    std::string dataset_name = spec.at("dataset").get<std::string>();
    auto ds = config_.datasets.find(dataset_name);
    if (ds == config_.datasets.end())
        throw Error(ErrorKind::config, "roles spec dataset: unknown '" + dataset_name + "'");
    std::filesystem::path dataset_path = ds->second;
    if (dataset_path.is_relative() && !config_.base_dir.empty())
        dataset_path = config_.base_dir / dataset_path;
    std::vector<TaskInstance> tasks = load_dataset(dataset_path, dataset_name);

    std::filesystem::path cache_dir =
        spec.value("cache_dir", (config_.output_dir / "role_cache").string());
    if (cache_dir.is_relative() && !config_.base_dir.empty())
        cache_dir = config_.base_dir / cache_dir;

    std::unique_ptr<roleiso::ArtifactCache> cache;
    roleiso::CacheBuildStats build_stats;
    if (cfg.paradigm != Paradigm::plan_execute) {
        cache = std::make_unique<roleiso::ArtifactCache>(cache_dir, cfg.paradigm, reference_name);
        build_stats = roleiso::build_artifact_cache(tasks, cfg, target_role, reference, *cache);
    }

    std::vector<std::pair<std::string, BackendHandle>> models;
    for (const auto& name : spec.at("evaluated"))
        models.emplace_back(name.get<std::string>(), backend(name.get<std::string>()));

    auto rows = roleiso::compare_roles(models, tasks, cfg, target_role, reference, cache.get(),
                                       backend(config_.judge), config_.sandbox);

    const auto out_dir = config_.output_dir / ("roles__" + spec_path.stem().string());
    std::filesystem::create_directories(out_dir);
    std::vector<json> records;
    std::string table = "model                n     successes  success_rate\n";
    for (const auto& row : rows) {
        json rec;
        rec["model"] = row.model;
        rec["target_role"] = target_role;
        rec["workflow"] = to_string(cfg.paradigm);
        rec["n"] = row.n;
        rec["successes"] = row.successes;
        rec["success_rate"] = row.success_rate;
        rec["uncached_tasks"] = build_stats.tasks_skipped;
        records.push_back(std::move(rec));
        std::string name = row.model;
        if (name.size() < 21) name += std::string(21 - name.size(), ' ');
        table += name + std::to_string(row.n) + "     " + std::to_string(row.successes) +
                 "          " + std::to_string(row.success_rate) + "\n";
    }
    if (build_stats.tasks_skipped > 0)
        table += "(" + std::to_string(build_stats.tasks_skipped) +
                 " task(s) skipped: reference backend failed during cache build)\n";
    jsonl::write_file(out_dir / "comparison.jsonl", records);
    jsonl::write_text(out_dir / "comparison.txt", table);
}

std::string Runner::report(const std::filesystem::path& runs_dir,
                           analytics::ReportFormat format) {
    if (!std::filesystem::exists(runs_dir))
        throw Error(ErrorKind::io, "runs directory " + runs_dir.string() + " does not exist");
    std::vector<analytics::CostRecord> records;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(runs_dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().parent_path().filename() != "costs") continue;
        records.push_back(
            cost_record_from_json(json::parse(jsonl::read_text(entry.path()))));
    }
    if (records.empty())
        throw Error(ErrorKind::io, "no cost records under " + runs_dir.string());
    std::sort(records.begin(), records.end(),
              [](const analytics::CostRecord& a, const analytics::CostRecord& b) {
                  return std::tie(a.workflow, a.task_id) < std::tie(b.workflow, b.task_id);
              });
    analytics::RunReport report = analytics::aggregate_run(records);
    analytics::emit_report(report, format, runs_dir);
    return analytics::render_table(report);
}

}  // namespace parley
