#include "parley/scripted_backend.hpp"

#include <set>

#include "parley/jsonl.hpp"

namespace parley {

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> entries, ScriptMode mode,
                                 std::string name)
    : entries_(std::move(entries)), mode_(mode), name_(std::move(name)) {
    if (mode_ == ScriptMode::key) {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (!seen.insert(entries_[i].key).second)
                throw Error(ErrorKind::script,
                            "duplicate script key '" + entries_[i].key + "' (entry " +
                                std::to_string(i + 1) + ")");
        }
    }
}

std::vector<CompletionRequest> ScriptedBackend::ledger() const {
    std::lock_guard<std::mutex> lock(mu_);
    return ledger_;
}

std::size_t ScriptedBackend::ledger_size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return ledger_.size();
}

RawReply ScriptedBackend::generate(const CompletionRequest& request) {
    const ScriptEntry* entry = nullptr;
    {
        std::lock_guard<std::mutex> lock(mu_);
        ledger_.push_back(request);
        if (mode_ == ScriptMode::sequence) {
            if (next_ >= entries_.size())
                throw Error(ErrorKind::script,
                            "script '" + name_ + "' exhausted after " +
                                std::to_string(entries_.size()) + " entries");
            entry = &entries_[next_++];
        } else {
            for (const auto& e : entries_) {
                if (e.key == request.agent_id ||
                    request.user_content.find(e.key) != std::string::npos) {
                    entry = &e;
                    break;
                }
            }
            if (!entry) {
                std::string head = request.user_content.substr(0, 60);
                throw Error(ErrorKind::script,
                            "no scripted entry for request key (agent '" + request.agent_id +
                                "', content '" + head + "...') in script '" + name_ + "'");
            }
        }
    }
    RawReply raw;
    raw.text = entry->reply;
    raw.prompt_tokens = entry->prompt_tokens;
    raw.completion_tokens = entry->completion_tokens;
    return raw;
}

std::shared_ptr<ScriptedBackend> load_scripted_backend(const std::filesystem::path& script) {
    std::vector<jsonl::json> lines;
    try {
        lines = jsonl::read_file(script);
    } catch (const Error& e) {
        throw Error(ErrorKind::script, e.what());
    }

    ScriptMode mode = ScriptMode::key;
    std::vector<ScriptEntry> entries;
    std::set<std::string> seen;
    std::size_t lineno = 0;
    for (const auto& rec : lines) {
        ++lineno;
        if (lineno == 1 && rec.contains("mode") && !rec.contains("key")) {
            std::string m = rec.at("mode").get<std::string>();
            if (m == "sequence")
                mode = ScriptMode::sequence;
            else if (m != "key")
                throw Error(ErrorKind::script,
                            script.string() + ":1: unknown script mode '" + m + "'");
            continue;
        }
        ScriptEntry entry;
        if (!rec.contains("key") || !rec.contains("reply"))
            throw Error(ErrorKind::script, script.string() + ":" + std::to_string(lineno) +
                                               ": script record needs key and reply");
        entry.key = rec.at("key").get<std::string>();
        entry.reply = rec.at("reply").get<std::string>();
        if (rec.contains("prompt_tokens"))
            entry.prompt_tokens = rec.at("prompt_tokens").get<std::int64_t>();
        if (rec.contains("completion_tokens"))
            entry.completion_tokens = rec.at("completion_tokens").get<std::int64_t>();
        if (mode == ScriptMode::key && !seen.insert(entry.key).second)
            throw Error(ErrorKind::script, script.string() + ":" + std::to_string(lineno) +
                                               ": duplicate script key '" + entry.key + "'");
        entries.push_back(std::move(entry));
    }
    return std::make_shared<ScriptedBackend>(std::move(entries), mode,
                                             script.filename().string());
}

}  // namespace parley
