#include "parley/serialize.hpp"

#include <set>

namespace parley {

using jsonl::json;

json to_json(const DecodingConfig& d) {
    json j;
    j["temperature"] = d.temperature;
    j["top_p"] = d.top_p;
    if (d.top_k) j["top_k"] = *d.top_k;
    j["max_tokens"] = d.max_tokens;
    j["strategy"] = to_string(d.strategy);
    return j;
}

DecodingConfig decoding_from_json(const json& j) {
    DecodingConfig d;
    if (j.contains("temperature")) d.temperature = j["temperature"].get<double>();
    if (j.contains("top_p")) d.top_p = j["top_p"].get<double>();
    if (j.contains("top_k")) d.top_k = j["top_k"].get<int>();
    if (j.contains("max_tokens")) d.max_tokens = j["max_tokens"].get<int>();
    if (j.contains("strategy")) d.strategy = strategy_from_string(j["strategy"].get<std::string>());
    d.validate();
    return d;
}

json to_json(const Message& m) {
    json j;
    j["k"] = m.index;
    j["agent"] = m.agent_id;
    j["role"] = m.role;
    j["round"] = m.round;
    j["kind"] = to_string(m.kind);
    j["content"] = m.content;
    if (m.reasoning) j["reasoning"] = *m.reasoning;
    j["tokens"] = m.tokens;
    j["usage"] = to_string(m.usage_source);
    return j;
}

namespace {

Message message_from_json(const json& j) {
    Message m;
    m.index = j.at("k").get<int>();
    m.agent_id = j.at("agent").get<std::string>();
    m.role = j.at("role").get<std::string>();
    m.round = j.at("round").get<int>();
    m.kind = message_kind_from_string(j.at("kind").get<std::string>());
    m.content = j.at("content").get<std::string>();
    if (j.contains("reasoning")) m.reasoning = j["reasoning"].get<std::string>();
    m.tokens = j.at("tokens").get<std::int64_t>();
    m.usage_source = j.at("usage").get<std::string>() == "local_estimate"
                         ? UsageSource::local_estimate
                         : UsageSource::backend_reported;
    return m;
}

}  // namespace

json to_json(const WorkflowConfig& cfg) {
    json j;
    j["paradigm"] = to_string(cfg.paradigm);
    if (cfg.paradigm == Paradigm::interactive_debate) j["n_debaters"] = cfg.n_debaters;
    j["rounds"] = cfg.rounds;
    j["aggregator_mode"] = to_string(cfg.aggregator_mode);
    j["answer_marker"] = cfg.answer_marker;
    if (cfg.reflection_single_call) j["reflection_single_call"] = true;
    // resolved defaults for the paradigm's roles, plus any explicit per-role
    // overrides (a "debater-2" override must survive into the snapshot)
    json prompts;
    for (const std::string& role : paradigm_roles(cfg.paradigm))
        prompts[role] = cfg.prompt_for(role);
    for (const auto& [role, prompt] : cfg.role_prompts)
        if (!prompts.contains(role)) prompts[role] = prompt;
    j["role_prompts"] = std::move(prompts);
    json decoding;
    for (const std::string& role : paradigm_roles(cfg.paradigm))
        decoding[role] = to_json(cfg.decoding_for(role));
    for (const auto& [role, d] : cfg.decoding)
        if (!decoding.contains(role)) decoding[role] = to_json(d);
    j["decoding"] = std::move(decoding);
    return j;
}

namespace {

WorkflowConfig workflow_config_from_json(const json& j) {
    WorkflowConfig cfg;
    cfg.paradigm = paradigm_from_string(j.at("paradigm").get<std::string>());
    if (j.contains("n_debaters")) cfg.n_debaters = j["n_debaters"].get<int>();
    if (j.contains("rounds")) cfg.rounds = j["rounds"].get<int>();
    if (j.contains("aggregator_mode"))
        cfg.aggregator_mode = aggregator_mode_from_string(j["aggregator_mode"].get<std::string>());
    if (j.contains("answer_marker")) cfg.answer_marker = j["answer_marker"].get<std::string>();
    if (j.contains("reflection_single_call"))
        cfg.reflection_single_call = j["reflection_single_call"].get<bool>();
    if (j.contains("role_prompts"))
        for (const auto& [role, prompt] : j["role_prompts"].items())
            cfg.role_prompts[role] = prompt.get<std::string>();
    if (j.contains("decoding"))
        for (const auto& [role, d] : j["decoding"].items())
            cfg.decoding[role] = decoding_from_json(d);
    return cfg;
}

}  // namespace

json to_json(const Transcript& t) {
    json j;
    j["task_id"] = t.task_id;
    j["workflow"] = to_json(t.workflow);
    json messages = json::array();
    for (const Message& m : t.messages) messages.push_back(to_json(m));
    j["messages"] = std::move(messages);
    j["final_answer"] = t.final_answer;
    j["total_cost"] = t.total_cost;
    j["query_prompt_tokens"] = t.query_prompt_tokens;
    j["wall_ms"] = t.wall_time.count();
    if (t.aggregator_fallback) j["aggregator_fallback"] = true;
    if (t.failed) {
        j["failed"] = true;
        j["failure"] = t.failure;
    }
    return j;
}

Transcript transcript_from_json(const json& j) {
    Transcript t;
    t.task_id = j.at("task_id").get<std::string>();
    t.workflow = workflow_config_from_json(j.at("workflow"));
    for (const auto& m : j.at("messages")) t.messages.push_back(message_from_json(m));
    t.final_answer = j.at("final_answer").get<std::string>();
    t.total_cost = j.at("total_cost").get<std::int64_t>();
    t.query_prompt_tokens = j.value("query_prompt_tokens", std::int64_t{0});
    t.wall_time = std::chrono::milliseconds(j.value("wall_ms", std::int64_t{0}));
    t.aggregator_fallback = j.value("aggregator_fallback", false);
    t.failed = j.value("failed", false);
    t.failure = j.value("failure", std::string());
    return t;
}

json to_json(const TaskScore& s, const std::string& task_id, Domain domain) {
    json j;
    j["task_id"] = task_id;
    j["domain"] = to_string(domain);
    j["score"] = s.score;
    if (s.verdict) {
        j["method"] = "judge_equivalence";
        j["judge_model"] = s.verdict->judge_model;
        j["judge_temperature"] = s.verdict->judge_temperature;
        j["rationale"] = s.verdict->rationale;
    } else if (s.code) {
        j["method"] = "code_tests";
        j["extracted"] = s.code->extracted;
        j["extraction_path"] = to_string(s.code->path);
        j["tests_total"] = s.code->tests_total;
        j["tests_passed"] = s.code->tests_passed;
        j["timeout"] = s.code->timeout;
    }
    return j;
}

json to_json(const analytics::CostRecord& r) {
    json j;
    j["task_id"] = r.task_id;
    j["workflow"] = r.workflow;
    j["total_tokens"] = r.total_tokens;
    json per_role;
    for (const auto& [role, tokens] : r.per_role_tokens) per_role[role] = tokens;
    j["per_role_tokens"] = std::move(per_role);
    j["query_length_tokens"] = r.query_length_tokens;
    j["success"] = r.success;
    j["wall_ms"] = r.wall_time.count();
    j["estimated_fraction"] = r.estimated_fraction;
    j["usage_source"] = r.estimated_fraction == 0.0
                            ? "backend_reported"
                            : (r.estimated_fraction == 1.0 ? "local_estimate" : "mixed");
    return j;
}

analytics::CostRecord cost_record_from_json(const json& j) {
    analytics::CostRecord r;
    r.task_id = j.at("task_id").get<std::string>();
    r.workflow = j.at("workflow").get<std::string>();
    r.total_tokens = j.at("total_tokens").get<std::int64_t>();
    if (j.contains("per_role_tokens"))
        for (const auto& [role, tokens] : j["per_role_tokens"].items())
            r.per_role_tokens[role] = tokens.get<std::int64_t>();
    r.query_length_tokens = j.value("query_length_tokens", std::int64_t{0});
    r.success = j.at("success").get<int>();
    r.wall_time = std::chrono::milliseconds(j.value("wall_ms", std::int64_t{0}));
    r.estimated_fraction = j.value("estimated_fraction", 0.0);
    return r;
}

std::vector<TaskInstance> load_dataset(const std::filesystem::path& path,
                                       const std::string& dataset_name) {
    std::vector<TaskInstance> tasks;
    std::set<std::string> ids;
    for (const auto& rec : jsonl::read_file(path)) {
        TaskInstance task;
        try {
            task.id = rec.at("id").get<std::string>();
            task.domain = domain_from_string(rec.at("domain").get<std::string>());
            task.input = rec.at("input").get<std::string>();
            task.source_dataset = dataset_name;
            if (task.domain == Domain::open_ended)
                throw Error(ErrorKind::config, path.string() + ": task '" + task.id +
                                                   "' is open_ended; those items belong in a "
                                                   "mime item file");
            if (task.domain == Domain::code) {
                const auto& suite = rec.at("test_suite");
                TestSuite ts;
                ts.language = suite.value("language", std::string("python"));
                for (const auto& c : suite.at("tests")) ts.cases.push_back(c.get<std::string>());
                task.test_suite = std::move(ts);
            } else {
                task.ground_truth = rec.at("ground_truth").get<std::string>();
            }
        } catch (const jsonl::json::exception& e) {
            throw Error(ErrorKind::config,
                        path.string() + ": bad task record: " + e.what());
        }
        task.validate();
        if (!ids.insert(task.id).second)
            throw Error(ErrorKind::config,
                        path.string() + ": duplicate task id '" + task.id + "'");
        tasks.push_back(std::move(task));
    }
    if (tasks.empty()) throw Error(ErrorKind::config, path.string() + ": dataset is empty");
    return tasks;
}

}  // namespace parley
