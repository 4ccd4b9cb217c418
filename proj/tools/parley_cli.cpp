// parley: batch runner for reasoning-workflow evaluation.
// Thin shell over the C API in parley/parley.h.

#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "parley/parley.h"

namespace {

struct EngineCloser {
    void operator()(parley_engine_t* e) const { parley_engine_close(e); }
};
using EnginePtr = std::unique_ptr<parley_engine_t, EngineCloser>;

int fail(parley_engine_t* engine, parley_status status) {
    std::fprintf(stderr, "parley: %s\n", parley_engine_last_error(engine));
    return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-agent reasoning workflows: run, judge, and report"};
    app.require_subcommand(1);
    app.fallthrough();  // allow --config after the subcommand name
    app.set_version_flag("--version", parley_version());

    std::string config_path;
    app.add_option("-c,--config", config_path, "run configuration file (JSON)");

    std::string workflow, dataset, output_dir;
    double sandbox_timeout_s = 0;
    long sandbox_memory_mb = 0;
    auto* run = app.add_subcommand("run", "run one workflow over one dataset (resumable)");
    run->add_option("--workflow,-w", workflow, "workflow name from the config")->required();
    run->add_option("--dataset,-d", dataset, "dataset name from the config")->required();
    run->add_option("--output", output_dir, "override the config's output_dir");
    run->add_option("--sandbox-timeout", sandbox_timeout_s, "code sandbox wall time, seconds");
    run->add_option("--sandbox-memory", sandbox_memory_mb, "code sandbox memory cap, MB");

    std::string rejudge_dir;
    auto* judge = app.add_subcommand("judge", "re-score the transcripts of an existing run");
    judge->add_option("--rejudge", rejudge_dir, "run directory to re-score")->required();
    judge->add_option("--sandbox-timeout", sandbox_timeout_s, "code sandbox wall time, seconds");
    judge->add_option("--sandbox-memory", sandbox_memory_mb, "code sandbox memory cap, MB");

    std::string roles_spec;
    auto* roles = app.add_subcommand("roles", "role-isolation comparison across models");
    roles->add_option("--spec", roles_spec, "role-isolation spec file (JSON)")->required();

    std::string items_path, mime_evaluated, mime_criteria, mime_judge;
    auto* mime = app.add_subcommand("mime", "open-ended option-generation evaluation");
    mime->add_option("--items", items_path, "item file (JSONL)")->required();
    mime->add_option("--evaluated", mime_evaluated, "backend that generates options");
    mime->add_option("--criteria", mime_criteria, "backend that generates criteria");
    mime->add_option("--judge", mime_judge, "judge backend (defaults to the config judge)");

    std::string runs_dir, format = "table";
    auto* report = app.add_subcommand("report", "aggregate cost records into report files");
    report->add_option("--runs", runs_dir, "directory holding run outputs")->required();
    report->add_option("--format", format, "table or data")
        ->check(CLI::IsMember({"table", "data"}));

    CLI11_PARSE(app, argc, argv);

    const bool needs_config = !report->parsed();
    if (needs_config && config_path.empty()) {
        std::fprintf(stderr, "parley: this subcommand needs --config\n");
        return static_cast<int>(PARLEY_ERR_CONFIG);
    }

    parley_status status = PARLEY_OK;
    EnginePtr engine(
        parley_engine_open(config_path.empty() ? nullptr : config_path.c_str(), &status));
    if (!engine) {
        std::fprintf(stderr, "parley: cannot load config '%s'\n", config_path.c_str());
        return static_cast<int>(status);
    }

    if (!output_dir.empty()) {
        status = parley_engine_set_output_dir(engine.get(), output_dir.c_str());
        if (status != PARLEY_OK) return fail(engine.get(), status);
    }
    if (sandbox_timeout_s > 0 || sandbox_memory_mb > 0) {
        status = parley_engine_set_sandbox_limits(
            engine.get(), static_cast<long>(sandbox_timeout_s * 1000.0), sandbox_memory_mb);
        if (status != PARLEY_OK) return fail(engine.get(), status);
    }

    if (run->parsed()) {
        status = parley_run_benchmark(engine.get(), workflow.c_str(), dataset.c_str());
    } else if (judge->parsed()) {
        status = parley_rejudge(engine.get(), rejudge_dir.c_str());
    } else if (roles->parsed()) {
        status = parley_run_roles(engine.get(), roles_spec.c_str());
    } else if (mime->parsed()) {
        status = parley_run_mime(engine.get(), items_path.c_str(),
                                 mime_evaluated.empty() ? nullptr : mime_evaluated.c_str(),
                                 mime_criteria.empty() ? nullptr : mime_criteria.c_str(),
                                 mime_judge.empty() ? nullptr : mime_judge.c_str());
    } else if (report->parsed()) {
        const char* rendered = nullptr;
        status = parley_report(engine.get(), runs_dir.c_str(), format.c_str(), &rendered);
        if (status == PARLEY_OK && rendered) std::fputs(rendered, stdout);
    }

    if (status != PARLEY_OK) return fail(engine.get(), status);
    return 0;
}
