#include "parley/backend.hpp"

#include <cctype>

namespace parley {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::config: return "config";
        case ErrorKind::io: return "io";
        case ErrorKind::transport: return "transport";
        case ErrorKind::script: return "script";
        case ErrorKind::parse: return "parse";
        case ErrorKind::contract: return "contract";
        case ErrorKind::sandbox: return "sandbox";
        case ErrorKind::internal: return "internal";
    }
    return "internal";
}

const char* to_string(Strategy s) {
    return s == Strategy::direct_response ? "direct_response" : "adaptive_reasoning";
}

const char* to_string(UsageSource s) {
    return s == UsageSource::backend_reported ? "backend_reported" : "local_estimate";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "direct_response") return Strategy::direct_response;
    if (s == "adaptive_reasoning") return Strategy::adaptive_reasoning;
    throw Error(ErrorKind::config, "unknown strategy '" + s + "'");
}

void DecodingConfig::validate() const {
    if (temperature < 0.0)
        throw Error(ErrorKind::config, "decoding.temperature must be >= 0");
    if (top_p <= 0.0 || top_p > 1.0)
        throw Error(ErrorKind::config, "decoding.top_p must be in (0, 1]");
    if (top_k && *top_k < 1)
        throw Error(ErrorKind::config, "decoding.top_k must be >= 1");
    if (max_tokens < 1)
        throw Error(ErrorKind::config, "decoding.max_tokens must be >= 1");
}

namespace {

bool is_word_char(unsigned char c) {
    return std::isalnum(c) != 0 || c == '_';
}

}  // namespace

std::int64_t estimate_tokens(std::string_view text) {
    std::int64_t count = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (c >= 0x80) {
            // one token per non-ASCII codepoint; skip continuation bytes
            ++count;
            ++i;
            while (i < text.size() && (static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) ++i;
        } else if (std::isspace(c)) {
            ++i;
        } else if (is_word_char(c)) {
            ++count;
            while (i < text.size()) {
                unsigned char w = static_cast<unsigned char>(text[i]);
                if (w >= 0x80 || !is_word_char(w)) break;
                ++i;
            }
        } else {
            ++count;  // punctuation: one token per character
            ++i;
        }
    }
    return count;
}

SplitReply split_reasoning(std::string_view reply, const ReasoningDelimiter& delim) {
    SplitReply out;
    if (delim.open.empty() || delim.close.empty() ||
        reply.find(delim.open) == std::string_view::npos) {
        out.answer = std::string(reply);
        return out;
    }
    std::string answer;
    std::string reasoning;
    std::size_t pos = 0;
    while (pos < reply.size()) {
        std::size_t open = reply.find(delim.open, pos);
        if (open == std::string_view::npos) {
            answer.append(reply.substr(pos));
            break;
        }
        answer.append(reply.substr(pos, open - pos));
        std::size_t body = open + delim.open.size();
        std::size_t close = reply.find(delim.close, body);
        if (close == std::string_view::npos) {
            // unterminated segment: the rest is reasoning
            reasoning.append(reply.substr(body));
            break;
        }
        reasoning.append(reply.substr(body, close - body));
        pos = close + delim.close.size();
    }
    // trim whitespace left at the seams of the answer
    std::size_t b = answer.find_first_not_of(" \t\r\n");
    std::size_t e = answer.find_last_not_of(" \t\r\n");
    out.answer = (b == std::string::npos) ? std::string() : answer.substr(b, e - b + 1);
    out.reasoning = std::move(reasoning);
    return out;
}

CompletionResult Backend::complete(const CompletionRequest& request) {
    if (request.user_content.empty())
        throw Error(ErrorKind::contract, "completion request has empty user_content");
    request.decoding.validate();

    RawReply raw = generate(request);

    CompletionResult result;
    bool estimated = false;

    std::string answer = raw.text;
    std::optional<std::string> reasoning;
    if (request.decoding.strategy == Strategy::adaptive_reasoning) {
        if (raw.native_reasoning) {
            reasoning = raw.native_reasoning;
        } else {
            SplitReply split = split_reasoning(raw.text, delimiter());
            answer = std::move(split.answer);
            if (split.reasoning && !split.reasoning->empty())
                reasoning = std::move(split.reasoning);
        }
    }

    if (raw.prompt_tokens) {
        result.prompt_tokens = *raw.prompt_tokens;
    } else {
        result.prompt_tokens = estimate_tokens(request.system_prompt) +
                               estimate_tokens(request.user_content);
        estimated = true;
    }
    if (raw.completion_tokens) {
        result.completion_tokens = *raw.completion_tokens;
    } else {
        std::int64_t generated = estimate_tokens(raw.text);
        if (raw.native_reasoning) generated += estimate_tokens(*raw.native_reasoning);
        result.completion_tokens = generated;
        estimated = true;
    }

    result.answer_text = std::move(answer);
    result.reasoning_text = std::move(reasoning);
    result.usage_source = estimated ? UsageSource::local_estimate : UsageSource::backend_reported;
    return result;
}

CompletionResult complete(const CompletionRequest& request, const BackendHandle& backend) {
    if (!backend) throw Error(ErrorKind::contract, "null backend handle");
    return backend->complete(request);
}

}  // namespace parley
