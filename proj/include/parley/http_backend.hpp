#pragma once

#include <chrono>
#include <string>

#include "parley/backend.hpp"

namespace parley {

/// Connection settings for an open chat-completions endpoint.
struct HttpBackendOptions {
    std::string base_url;              // e.g. "http://127.0.0.1:8000"
    std::string path = "/v1/chat/completions";
    std::string model_name;
    std::string auth_env;              // env var holding the bearer token; never a literal
    int max_attempts = 3;              // transport errors only
    std::chrono::milliseconds backoff_base{250};
    std::chrono::milliseconds read_timeout{600000};
    std::chrono::milliseconds connect_timeout{5000};
};

/// Chat-completions client. Request body: {model, messages[{role,content}],
/// temperature, top_p, max_tokens [, top_k]}; reply parsed from
/// choices[0].message.content and usage.{prompt_tokens, completion_tokens}.
/// A native choices[0].message.reasoning_content field is honored when the
/// server emits one; otherwise the delimiter split applies.
class HttpBackend final : public Backend {
public:
    explicit HttpBackend(HttpBackendOptions options);

    const std::string& name() const override { return options_.model_name; }
    const char* kind() const override { return "http_chat"; }
    const HttpBackendOptions& options() const { return options_; }

protected:
    RawReply generate(const CompletionRequest& request) override;

private:
    HttpBackendOptions options_;
    std::string host_;
    int port_ = 80;
};

}  // namespace parley
