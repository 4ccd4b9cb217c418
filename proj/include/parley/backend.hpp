#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "parley/error.hpp"

namespace parley {

enum class Strategy { direct_response, adaptive_reasoning };
enum class UsageSource { backend_reported, local_estimate };

const char* to_string(Strategy s);
const char* to_string(UsageSource s);
Strategy strategy_from_string(const std::string& s);

/// Sampling knobs for one completion call.
struct DecodingConfig {
    double temperature = 0.7;
    double top_p = 0.95;
    std::optional<int> top_k;
    int max_tokens = 2048;
    Strategy strategy = Strategy::direct_response;

    void validate() const;  // throws Error(config)
};

/// One request to a model backend: role prompt plus conditioning context.
struct CompletionRequest {
    std::string system_prompt;
    std::string user_content;
    DecodingConfig decoding;
    std::string agent_id;
};

struct CompletionResult {
    std::string answer_text;
    std::optional<std::string> reasoning_text;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    UsageSource usage_source = UsageSource::backend_reported;
};

/// Think-tag pair used to split a reasoning segment out of a reply when the
/// endpoint has no native reasoning channel.
struct ReasoningDelimiter {
    std::string open = "<think>";
    std::string close = "</think>";
};

/// Deterministic fallback token count: one token per alphanumeric run, one per
/// punctuation character, one per non-ASCII codepoint. Monotone under
/// concatenation. Used whenever a backend omits usage; never reported as
/// backend_reported.
std::int64_t estimate_tokens(std::string_view text);

struct SplitReply {
    std::string answer;
    std::optional<std::string> reasoning;
};

/// Splits every delimited reasoning segment out of `reply`. The answer part
/// never contains the delimiter; an unterminated open tag swallows the rest of
/// the text as reasoning.
SplitReply split_reasoning(std::string_view reply, const ReasoningDelimiter& delim);

/// What a concrete backend returns before usage fallback and reasoning
/// splitting are applied.
struct RawReply {
    std::string text;
    std::optional<std::string> native_reasoning;  // endpoint-provided reasoning channel
    std::optional<std::int64_t> prompt_tokens;
    std::optional<std::int64_t> completion_tokens;
};

class Backend {
public:
    virtual ~Backend() = default;

    /// Runs one completion. Applies the reasoning split when the request asks
    /// for adaptive_reasoning, and the local token estimator when the backend
    /// omits usage (flagged via usage_source, never silently zero).
    CompletionResult complete(const CompletionRequest& request);

    virtual const std::string& name() const = 0;
    virtual const char* kind() const = 0;

    const ReasoningDelimiter& delimiter() const { return delimiter_; }
    void set_delimiter(ReasoningDelimiter d) { delimiter_ = std::move(d); }

protected:
    virtual RawReply generate(const CompletionRequest& request) = 0;

private:
    ReasoningDelimiter delimiter_;
};

using BackendHandle = std::shared_ptr<Backend>;

/// Free-function form used throughout the workflow code.
CompletionResult complete(const CompletionRequest& request, const BackendHandle& backend);

}  // namespace parley
