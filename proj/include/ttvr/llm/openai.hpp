#pragma once

#include "ttvr/core/log.hpp"
#include "ttvr/llm/backend.hpp"

#include <chrono>
#include <stdexcept>
#include <string>

namespace ttvr::llm {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OpenAIConfig {
    /// Base URL up to and including the API version, e.g.
    /// "https://api.openai.com/v1". "/chat/completions" is appended.
    std::string endpoint = "https://api.openai.com/v1";
    std::string model = "gpt-5";
    /// Name of the environment variable holding the credential.
    std::string api_key_env = "OPENAI_API_KEY";
    std::chrono::milliseconds timeout{std::chrono::seconds(900)};
    std::chrono::milliseconds retry_backoff{2000};
    bool verbose = false;
};

/// Maps an HTTP status (non-2xx) to the error taxonomy.
[[nodiscard]] BackendError classify_http_status(int status, std::string_view body);

/// Extracts choices[0].message.content from a chat-completions response body.
[[nodiscard]] Result<std::string, BackendError> parse_chat_response(std::string_view body);

/// Client for an OpenAI-compatible chat-completions endpoint. Whole-message
/// completions only. GATEWAY and TIMEOUT failures are retried once after
/// `retry_backoff` before being surfaced.
class OpenAIBackend final : public Backend {
public:
    /// Reads the credential from the environment; throws ConfigError if unset.
    static std::shared_ptr<OpenAIBackend> from_environment(OpenAIConfig config,
                                                           EventLog log = {});

    OpenAIBackend(OpenAIConfig config, std::string api_key, EventLog log = {});

    [[nodiscard]] std::string id() const override;

private:
    CompletionResult do_complete(const CompletionRequest& request) override;
    CompletionResult attempt(const CompletionRequest& request);

    OpenAIConfig config_;
    std::string api_key_;
    std::string origin_;
    std::string path_;
    EventLog log_;
};

} // namespace ttvr::llm
