#include "parley/parley.h"

#include <memory>
#include <string>

#include "parley/analytics.hpp"
#include "parley/config.hpp"
#include "parley/runner.hpp"

using parley::Error;
using parley::ErrorKind;

struct parley_engine_t {
    std::unique_ptr<parley::RunConfig> config;
    std::unique_ptr<parley::Runner> runner;
    std::string last_error;
    std::string rendered;

    parley::Runner& require_runner() {
        if (!config)
            throw Error(ErrorKind::config, "engine was opened without a config file");
        if (!runner) runner = std::make_unique<parley::Runner>(*config);
        return *runner;
    }
};

namespace {

parley_status status_of(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::config: return PARLEY_ERR_CONFIG;
        case ErrorKind::io: return PARLEY_ERR_IO;
        case ErrorKind::transport: return PARLEY_ERR_BACKEND;
        case ErrorKind::script: return PARLEY_ERR_SCRIPT;
        case ErrorKind::parse: return PARLEY_ERR_PARSE;
        case ErrorKind::contract: return PARLEY_ERR_CONTRACT;
        case ErrorKind::sandbox: return PARLEY_ERR_SANDBOX;
        case ErrorKind::internal: return PARLEY_ERR_INTERNAL;
    }
    return PARLEY_ERR_INTERNAL;
}

template <typename Fn>
parley_status guarded(parley_engine_t* engine, Fn&& fn) {
    if (!engine) return PARLEY_ERR_INVALID_ARG;
    engine->last_error.clear();
    try {
        fn();
        return PARLEY_OK;
    } catch (const Error& e) {
        engine->last_error = e.what();
        return status_of(e.kind());
    } catch (const std::exception& e) {
        engine->last_error = e.what();
        return PARLEY_ERR_INTERNAL;
    }
}

}  // namespace

extern "C" {

const char* parley_version(void) { return "0.1.0"; }

parley_engine_t* parley_engine_open(const char* config_path, parley_status* status_out) {
    auto engine = std::make_unique<parley_engine_t>();
    if (config_path) {
        try {
            engine->config =
                std::make_unique<parley::RunConfig>(parley::load_config(config_path));
        } catch (const Error& e) {
            if (status_out) *status_out = status_of(e.kind());
            return nullptr;
        } catch (const std::exception&) {
            if (status_out) *status_out = PARLEY_ERR_INTERNAL;
            return nullptr;
        }
    }
    if (status_out) *status_out = PARLEY_OK;
    return engine.release();
}

void parley_engine_close(parley_engine_t* engine) { delete engine; }

const char* parley_engine_last_error(const parley_engine_t* engine) {
    return engine ? engine->last_error.c_str() : "";
}

parley_status parley_engine_set_output_dir(parley_engine_t* engine, const char* dir) {
    if (!dir) return PARLEY_ERR_INVALID_ARG;
    return guarded(engine, [&] {
        if (!engine->config)
            throw Error(ErrorKind::config, "engine was opened without a config file");
        engine->config->output_dir = dir;
        engine->runner.reset();
    });
}

parley_status parley_engine_set_sandbox_limits(parley_engine_t* engine, long wall_ms,
                                               long memory_mb) {
    return guarded(engine, [&] {
        if (!engine->config)
            throw Error(ErrorKind::config, "engine was opened without a config file");
        if (wall_ms < 0 || memory_mb < 0)
            throw Error(ErrorKind::contract, "sandbox limits must be non-negative");
        if (wall_ms > 0) engine->config->sandbox.wall_time = std::chrono::milliseconds(wall_ms);
        if (memory_mb > 0)
            engine->config->sandbox.memory_bytes = static_cast<std::int64_t>(memory_mb) * 1024 *
                                                   1024;
        engine->runner.reset();
    });
}

parley_status parley_run_benchmark(parley_engine_t* engine, const char* workflow,
                                   const char* dataset) {
    if (!workflow || !dataset) return PARLEY_ERR_INVALID_ARG;
    return guarded(engine, [&] { engine->require_runner().run_benchmark(workflow, dataset); });
}

parley_status parley_rejudge(parley_engine_t* engine, const char* run_dir) {
    if (!run_dir) return PARLEY_ERR_INVALID_ARG;
    return guarded(engine, [&] { engine->require_runner().rejudge(run_dir); });
}

parley_status parley_run_roles(parley_engine_t* engine, const char* spec_path) {
    if (!spec_path) return PARLEY_ERR_INVALID_ARG;
    return guarded(engine, [&] { engine->require_runner().run_roles(spec_path); });
}

parley_status parley_run_mime(parley_engine_t* engine, const char* items_path,
                              const char* evaluated, const char* criteria, const char* judge) {
    if (!items_path) return PARLEY_ERR_INVALID_ARG;
    return guarded(engine, [&] {
        engine->require_runner().run_mime(items_path, evaluated ? evaluated : "",
                                          criteria ? criteria : "", judge ? judge : "");
    });
}

parley_status parley_report(parley_engine_t* engine, const char* runs_dir, const char* format,
                            const char** rendered_out) {
    if (!runs_dir || !format) return PARLEY_ERR_INVALID_ARG;
    std::string fmt = format;
    if (fmt != "table" && fmt != "data") return PARLEY_ERR_INVALID_ARG;
    return guarded(engine, [&] {
        // reporting works without a config: it only reads persisted records
        parley::RunConfig empty;
        parley::Runner local(engine->config ? *engine->config : empty);
        engine->rendered = local.report(runs_dir, fmt == "table"
                                                      ? parley::analytics::ReportFormat::table_text
                                                      : parley::analytics::ReportFormat::delimited_data);
        if (rendered_out) *rendered_out = engine->rendered.c_str();
    });
}

}  // extern "C"
