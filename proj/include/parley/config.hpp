#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "parley/backend.hpp"
#include "parley/jsonl.hpp"
#include "parley/mime.hpp"
#include "parley/sandbox.hpp"
#include "parley/workflow.hpp"

namespace parley {

enum class BackendKind { http_chat, scripted };
const char* to_string(BackendKind k);

/// Declarative description of a backend; handles are opened from this.
struct BackendSpec {
    BackendKind kind = BackendKind::scripted;
    std::string endpoint;    // http base url or script file path
    std::string model_name;
    std::string auth_env;    // env var name; config-file literals are rejected
    ReasoningDelimiter delimiter;
};

BackendHandle open_backend(const BackendSpec& spec, const std::filesystem::path& base_dir = {});

struct WorkflowEntry {
    WorkflowConfig config;
    std::map<std::string, std::string> role_backends;  // role -> backend name; "*" default
};

struct RunConfig {
    std::map<std::string, BackendSpec> backends;
    std::map<std::string, WorkflowEntry> workflows;
    std::map<std::string, std::string> datasets;  // name -> file path
    std::string judge;                            // backend name
    int concurrency_limit = 1;
    std::filesystem::path output_dir = "runs";
    std::int64_t seed = 0;
    bool shuffle_tasks = false;  // seed-driven task ordering
    SandboxLimits sandbox;
    std::string mime_evaluated;  // default backend names for the mime pipeline
    std::string mime_criteria;
    mime::DimensionWeights mime_weights;
    std::filesystem::path base_dir;  // directory of the config file, for relative paths

    void validate() const;  // every reference must resolve; errors carry field paths
};

/// Parses and fully validates a config file. Duplicate keys anywhere in the
/// document and unresolved backend references are rejected eagerly.
RunConfig load_config(const std::filesystem::path& path);

RunConfig config_from_json(const jsonl::json& doc, const std::filesystem::path& base_dir);

}  // namespace parley
