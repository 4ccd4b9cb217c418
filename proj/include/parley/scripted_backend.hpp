#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "parley/backend.hpp"

namespace parley {

/// One scripted reply. Token fields may be omitted, in which case the local
/// estimator kicks in and the result is flagged local_estimate.
struct ScriptEntry {
    std::string key;
    std::string reply;
    std::optional<std::int64_t> prompt_tokens;
    std::optional<std::int64_t> completion_tokens;
};

enum class ScriptMode {
    key,       // pure lookup: first entry whose key matches the request
    sequence,  // entries consumed strictly in file order, keys ignored
};

/// Deterministic test backend: replies come from a script, every request is
/// recorded in an append-only ledger.
///
/// Key matching: an entry matches a request when its key equals the request's
/// agent_id or occurs as a substring of user_content. Keys are unique per
/// script; lookup is stateless, so identical request sequences always see
/// identical replies.
class ScriptedBackend final : public Backend {
public:
    ScriptedBackend(std::vector<ScriptEntry> entries, ScriptMode mode = ScriptMode::key,
                    std::string name = "scripted");

    const std::string& name() const override { return name_; }
    const char* kind() const override { return "scripted"; }
    ScriptMode mode() const { return mode_; }

    /// Snapshot of every request seen so far, in arrival order.
    std::vector<CompletionRequest> ledger() const;
    std::size_t ledger_size() const;

protected:
    RawReply generate(const CompletionRequest& request) override;

private:
    std::vector<ScriptEntry> entries_;
    ScriptMode mode_;
    std::string name_;

    mutable std::mutex mu_;
    std::vector<CompletionRequest> ledger_;
    std::size_t next_ = 0;  // sequence mode cursor
};

/// Parses a line-delimited script file: records {key, reply, prompt_tokens,
/// completion_tokens}, optionally preceded by a {"mode": "sequence"|"key"}
/// header line. Duplicate keys are a parse error naming the line.
std::shared_ptr<ScriptedBackend> load_scripted_backend(const std::filesystem::path& script);

}  // namespace parley
