#include "parley/http_backend.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace parley {

namespace {
using json = nlohmann::json;

// "http://host:port[/prefix]" -> (host, port, prefix). This client is
// plaintext-only; https endpoints are rejected rather than silently
// downgraded.
void parse_base_url(const std::string& url, std::string& host, int& port, std::string& prefix) {
    std::string rest = url;
    auto scheme = rest.find("://");
    if (scheme != std::string::npos) {
        if (rest.substr(0, scheme) == "https")
            throw Error(ErrorKind::config,
                        "https endpoints are not supported by this client; terminate TLS in "
                        "front of it ('" + url + "')");
        rest = rest.substr(scheme + 3);
    }
    auto slash = rest.find('/');
    if (slash != std::string::npos) {
        prefix = rest.substr(slash);
        while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
        rest = rest.substr(0, slash);
    }
    auto colon = rest.find(':');
    if (colon != std::string::npos) {
        host = rest.substr(0, colon);
        port = std::atoi(rest.c_str() + colon + 1);
    } else {
        host = rest;
        port = 80;
    }
    if (host.empty() || port <= 0)
        throw Error(ErrorKind::config, "bad backend endpoint '" + url + "'");
}

bool retryable_status(int status) {
    return status == 429 || status >= 500;
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
    if (options_.base_url.empty())
        throw Error(ErrorKind::config, "http_chat backend requires an endpoint");
    if (options_.model_name.empty())
        throw Error(ErrorKind::config, "http_chat backend requires a model name");
    std::string prefix;
    parse_base_url(options_.base_url, host_, port_, prefix);
    if (!prefix.empty()) options_.path = prefix + options_.path;
}

RawReply HttpBackend::generate(const CompletionRequest& request) {
    json body;
    body["model"] = options_.model_name;
    json messages = json::array();
    if (!request.system_prompt.empty())
        messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
    messages.push_back({{"role", "user"}, {"content", request.user_content}});
    body["messages"] = std::move(messages);
    body["temperature"] = request.decoding.temperature;
    body["top_p"] = request.decoding.top_p;
    body["max_tokens"] = request.decoding.max_tokens;
    if (request.decoding.top_k) body["top_k"] = *request.decoding.top_k;
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!options_.auth_env.empty()) {
        if (const char* token = std::getenv(options_.auth_env.c_str()); token && *token)
            headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    std::string last_failure;
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        if (attempt > 1) {
            auto delay = options_.backoff_base * (1 << (attempt - 2));
            std::this_thread::sleep_for(delay);
        }
        httplib::Client client(host_, port_);
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(
                                          options_.connect_timeout).count(),
                                      (options_.connect_timeout.count() % 1000) * 1000);
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(
                                    options_.read_timeout).count(),
                                (options_.read_timeout.count() % 1000) * 1000);
        auto res = client.Post(options_.path, headers, payload, "application/json");
        if (!res) {
            last_failure = "connection to " + options_.base_url + " failed (" +
                           httplib::to_string(res.error()) + ")";
            continue;
        }
        if (retryable_status(res->status)) {
            last_failure = "HTTP " + std::to_string(res->status) + " from " + options_.base_url;
            continue;
        }
        if (res->status != 200)
            throw Error(ErrorKind::transport, "HTTP " + std::to_string(res->status) + " from " +
                                                  options_.base_url + ": " + res->body);

        json reply;
        try {
            reply = json::parse(res->body);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::parse,
                        std::string("malformed completion response: ") + e.what());
        }
        try {
            const json& message = reply.at("choices").at(0).at("message");
            RawReply raw;
            raw.text = message.at("content").is_null() ? std::string()
                                                       : message.at("content").get<std::string>();
            if (message.contains("reasoning_content") && message["reasoning_content"].is_string())
                raw.native_reasoning = message["reasoning_content"].get<std::string>();
            if (reply.contains("usage") && reply["usage"].is_object()) {
                const json& usage = reply["usage"];
                if (usage.contains("prompt_tokens") && usage["prompt_tokens"].is_number())
                    raw.prompt_tokens = usage["prompt_tokens"].get<std::int64_t>();
                if (usage.contains("completion_tokens") && usage["completion_tokens"].is_number())
                    raw.completion_tokens = usage["completion_tokens"].get<std::int64_t>();
            }
            return raw;
        } catch (const json::exception& e) {
            throw Error(ErrorKind::parse,
                        std::string("completion response missing choices[0].message.content: ") +
                            e.what());
        }
    }
    throw TransportError(last_failure + " after " + std::to_string(options_.max_attempts) +
                             " attempts",
                         options_.max_attempts);
}

}  // namespace parley
