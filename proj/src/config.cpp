#include "parley/config.hpp"

#include <fstream>
#include <set>

#include "parley/http_backend.hpp"
#include "parley/scripted_backend.hpp"
#include "parley/serialize.hpp"

namespace parley {

using jsonl::json;

const char* to_string(BackendKind k) {
    return k == BackendKind::http_chat ? "http_chat" : "scripted";
}

namespace {

/// Parse with duplicate-key rejection; nlohmann otherwise keeps the last
/// value silently.
json parse_strict(const std::string& text, const std::string& origin) {
    std::vector<std::set<std::string>> keys(1);
    auto cb = [&keys](int depth, json::parse_event_t event, json& parsed) -> bool {
        auto d = static_cast<std::size_t>(depth);
        if (event == json::parse_event_t::object_start) {
            if (keys.size() <= d + 1) keys.resize(d + 2);
            keys[d + 1].clear();
        } else if (event == json::parse_event_t::key) {
            if (keys.size() <= d) keys.resize(d + 1);
            if (!keys[d].insert(parsed.get<std::string>()).second)
                throw Error(ErrorKind::config,
                            "duplicate key '" + parsed.get<std::string>() + "'");
        }
        return true;
    };
    try {
        return json::parse(text, cb);
    } catch (const Error&) {
        throw;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config, origin + ": " + e.what());
    }
}

BackendSpec backend_spec_from_json(const json& j, const std::string& field_path) {
    for (const char* banned : {"api_key", "token", "auth", "password", "secret"}) {
        if (j.contains(banned))
            throw Error(ErrorKind::config,
                        field_path + "." + banned +
                            ": credentials belong in an environment variable (auth_env), never "
                            "in the config file");
    }
    BackendSpec spec;
    std::string kind = j.value("kind", std::string("http_chat"));
    if (kind == "http_chat") {
        spec.kind = BackendKind::http_chat;
        if (!j.contains("endpoint") || !j.contains("model"))
            throw Error(ErrorKind::config, field_path + ": http_chat needs endpoint and model");
        spec.endpoint = j["endpoint"].get<std::string>();
        spec.model_name = j["model"].get<std::string>();
    } else if (kind == "scripted") {
        spec.kind = BackendKind::scripted;
        if (!j.contains("script"))
            throw Error(ErrorKind::config, field_path + ": scripted needs a script path");
        spec.endpoint = j["script"].get<std::string>();
        spec.model_name = j.value("model", std::string());
    } else {
        throw Error(ErrorKind::config, field_path + ".kind: unknown '" + kind + "'");
    }
    spec.auth_env = j.value("auth_env", std::string());
    if (j.contains("delimiter")) {
        spec.delimiter.open = j["delimiter"].value("open", spec.delimiter.open);
        spec.delimiter.close = j["delimiter"].value("close", spec.delimiter.close);
    }
    return spec;
}

WorkflowEntry workflow_entry_from_json(const json& j, const std::string& field_path) {
    WorkflowEntry entry;
    if (!j.contains("paradigm"))
        throw Error(ErrorKind::config, field_path + ".paradigm: missing");
    entry.config.paradigm = paradigm_from_string(j["paradigm"].get<std::string>());
    if (j.contains("n_debaters")) entry.config.n_debaters = j["n_debaters"].get<int>();
    if (j.contains("rounds")) entry.config.rounds = j["rounds"].get<int>();
    if (j.contains("aggregator_mode"))
        entry.config.aggregator_mode =
            aggregator_mode_from_string(j["aggregator_mode"].get<std::string>());
    if (j.contains("answer_marker"))
        entry.config.answer_marker = j["answer_marker"].get<std::string>();
    if (j.contains("reflection_single_call"))
        entry.config.reflection_single_call = j["reflection_single_call"].get<bool>();
    if (j.contains("role_prompts"))
        for (const auto& [role, prompt] : j["role_prompts"].items())
            entry.config.role_prompts[role] = prompt.get<std::string>();
    if (j.contains("decoding"))
        for (const auto& [role, d] : j["decoding"].items())
            entry.config.decoding[role] = decoding_from_json(d);
    if (j.contains("backend")) entry.role_backends["*"] = j["backend"].get<std::string>();
    if (j.contains("backends"))
        for (const auto& [role, name] : j["backends"].items())
            entry.role_backends[role] = name.get<std::string>();
    if (entry.role_backends.empty())
        throw Error(ErrorKind::config, field_path + ": needs a backend or a backends map");
    return entry;
}

}  // namespace

void RunConfig::validate() const {
    if (concurrency_limit < 1)
        throw Error(ErrorKind::config, "concurrency_limit must be >= 1");
    for (const auto& [wf_name, entry] : workflows) {
        entry.config.validate();
        for (const auto& [role, backend_name] : entry.role_backends) {
            if (backends.count(backend_name)) continue;
            std::string field = role == "*" ? "workflows." + wf_name + ".backend"
                                            : "workflows." + wf_name + ".backends." + role;
            throw Error(ErrorKind::config, field + ": unknown '" + backend_name + "'");
        }
    }
    if (judge.empty()) throw Error(ErrorKind::config, "judge: missing");
    if (!backends.count(judge))
        throw Error(ErrorKind::config, "judge: unknown '" + judge + "'");
    if (!mime_evaluated.empty() && !backends.count(mime_evaluated))
        throw Error(ErrorKind::config, "mime.evaluated: unknown '" + mime_evaluated + "'");
    if (!mime_criteria.empty() && !backends.count(mime_criteria))
        throw Error(ErrorKind::config, "mime.criteria: unknown '" + mime_criteria + "'");
    mime_weights.validate();
}

RunConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    cfg.base_dir = base_dir;
    if (doc.contains("backends"))
        for (const auto& [name, spec] : doc["backends"].items())
            cfg.backends[name] = backend_spec_from_json(spec, "backends." + name);
    if (doc.contains("workflows"))
        for (const auto& [name, entry] : doc["workflows"].items())
            cfg.workflows[name] = workflow_entry_from_json(entry, "workflows." + name);
    if (doc.contains("datasets"))
        for (const auto& [name, path] : doc["datasets"].items())
            cfg.datasets[name] = path.get<std::string>();
    cfg.judge = doc.value("judge", std::string());
    cfg.concurrency_limit = doc.value("concurrency_limit", 1);
    if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
    if (cfg.output_dir.is_relative() && !base_dir.empty())
        cfg.output_dir = base_dir / cfg.output_dir;
    cfg.seed = doc.value("seed", std::int64_t{0});
    cfg.shuffle_tasks = doc.value("shuffle_tasks", false);
    if (doc.contains("sandbox")) {
        const json& s = doc["sandbox"];
        if (s.contains("timeout_ms"))
            cfg.sandbox.wall_time = std::chrono::milliseconds(s["timeout_ms"].get<std::int64_t>());
        if (s.contains("memory_mb"))
            cfg.sandbox.memory_bytes = s["memory_mb"].get<std::int64_t>() * 1024 * 1024;
    }
    if (doc.contains("mime")) {
        const json& m = doc["mime"];
        cfg.mime_evaluated = m.value("evaluated", std::string());
        cfg.mime_criteria = m.value("criteria", std::string());
        if (m.contains("weights")) {
            const json& w = m["weights"];
            cfg.mime_weights.fluency = w.value("fluency", cfg.mime_weights.fluency);
            cfg.mime_weights.confusability =
                w.value("confusability", cfg.mime_weights.confusability);
            cfg.mime_weights.accuracy_or_logic =
                w.value("accuracy_or_logic", cfg.mime_weights.accuracy_or_logic);
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot open config " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json doc = parse_strict(text, path.string());
    return config_from_json(doc, path.parent_path());
}

BackendHandle open_backend(const BackendSpec& spec, const std::filesystem::path& base_dir) {
    if (spec.kind == BackendKind::scripted) {
        std::filesystem::path script = spec.endpoint;
        if (script.is_relative() && !base_dir.empty()) script = base_dir / script;
        auto backend = load_scripted_backend(script);
        backend->set_delimiter(spec.delimiter);
        return backend;
    }
    HttpBackendOptions options;
    options.base_url = spec.endpoint;
    options.model_name = spec.model_name;
    options.auth_env = spec.auth_env;
    auto backend = std::make_shared<HttpBackend>(options);
    backend->set_delimiter(spec.delimiter);
    return backend;
}

}  // namespace parley
