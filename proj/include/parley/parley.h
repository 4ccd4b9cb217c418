/* parley C API: stable entry points into the reasoning-workflow harness.
 *
 * Usage:
 *   parley_engine_t* eng = parley_engine_open("config.json", NULL);
 *   if (!eng) ...;
 *   if (parley_run_benchmark(eng, "debate", "gsm") != PARLEY_OK)
 *       fprintf(stderr, "%s\n", parley_engine_last_error(eng));
 *   parley_engine_close(eng);
 *
 * Engines are not thread-safe; use one per thread. Strings returned by the
 * API are owned by the engine and valid until the next call on that engine.
 */

#ifndef PARLEY_H
#define PARLEY_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct parley_engine_t parley_engine_t;

typedef enum parley_status {
    PARLEY_OK = 0,
    PARLEY_ERR_INVALID_ARG = 1,
    PARLEY_ERR_CONFIG = 2,
    PARLEY_ERR_IO = 3,
    PARLEY_ERR_BACKEND = 4,
    PARLEY_ERR_SCRIPT = 5,
    PARLEY_ERR_PARSE = 6,
    PARLEY_ERR_CONTRACT = 7,
    PARLEY_ERR_SANDBOX = 8,
    PARLEY_ERR_INTERNAL = 9
} parley_status;

const char* parley_version(void);

/* Opens an engine. config_path may be NULL for an engine limited to the
 * report operation. On failure returns NULL and, when status_out is non-NULL,
 * stores the cause there. */
parley_engine_t* parley_engine_open(const char* config_path, parley_status* status_out);

void parley_engine_close(parley_engine_t* engine);

/* Message for the most recent failure on this engine; empty string if none. */
const char* parley_engine_last_error(const parley_engine_t* engine);

/* Overrides the config's output directory. */
parley_status parley_engine_set_output_dir(parley_engine_t* engine, const char* dir);

/* Sandbox limits for code-task evaluation. Zero keeps the current value. */
parley_status parley_engine_set_sandbox_limits(parley_engine_t* engine, long wall_ms,
                                               long memory_mb);

/* Runs one (workflow, dataset) pair; already-persisted tasks are skipped.
 * Task-level failures are recorded as data and still return PARLEY_OK. */
parley_status parley_run_benchmark(parley_engine_t* engine, const char* workflow,
                                   const char* dataset);

/* Re-scores every transcript under an existing run directory. */
parley_status parley_rejudge(parley_engine_t* engine, const char* run_dir);

/* Role-isolation comparison driven by a spec file. */
parley_status parley_run_roles(parley_engine_t* engine, const char* spec_path);

/* Open-ended option-generation pipeline over an item file. Backend names may
 * be NULL to use the config's mime defaults (judge falls back to the config
 * judge). */
parley_status parley_run_mime(parley_engine_t* engine, const char* items_path,
                              const char* evaluated, const char* criteria, const char* judge);

/* Aggregates cost records under runs_dir and writes report files there.
 * format is "table" or "data". When rendered_out is non-NULL it receives the
 * engine-owned text rendering. */
parley_status parley_report(parley_engine_t* engine, const char* runs_dir, const char* format,
                            const char** rendered_out);

#ifdef __cplusplus
}
#endif

#endif /* PARLEY_H */
