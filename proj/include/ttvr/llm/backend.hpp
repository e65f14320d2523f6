#pragma once

#include "ttvr/core/result.hpp"

#include <atomic>
#include <chrono>
#include <string>
#include <string_view>

namespace ttvr::llm {

struct CompletionRequest {
    std::string system_prompt;
    std::string user_prompt;
    std::string model_name;
    /// Agent role and iteration, e.g. "verifier_a/it=3/run=1a2b3c4d". Used for
    /// logs and by scripted backends for matching.
    std::string call_tag;
};

struct CompletionResponse {
    std::string text;
    std::chrono::milliseconds latency{0};
    std::string backend_id;
};

enum class ErrorKind { Gateway, Timeout, Auth, Malformed, Other };

struct BackendError {
    ErrorKind kind = ErrorKind::Other;
    std::string detail;
    bool retryable = false;

    /// Builds an error with the default retry classification for its kind:
    /// GATEWAY and TIMEOUT are retryable, everything else is not.
    static BackendError of(ErrorKind kind, std::string detail);

    bool operator==(const BackendError&) const = default;
};

using CompletionResult = Result<CompletionResponse, BackendError>;

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;
[[nodiscard]] ErrorKind parse_error_kind(std::string_view name);

/// Uniform completion interface. Every call is a fresh, stateless
/// conversation: one system prompt, one user prompt, one reply.
class Backend {
public:
    virtual ~Backend() = default;

    /// Throws std::invalid_argument when either prompt is empty.
    [[nodiscard]] CompletionResult complete(const CompletionRequest& request);

    [[nodiscard]] virtual std::string id() const = 0;

private:
    virtual CompletionResult do_complete(const CompletionRequest& request) = 0;
};

/// Per-run transient-error accounting. Confined to one TTVR run; the
/// counter only ever increases.
class Session {
public:
    explicit Session(int gateway_error_budget);

    /// Counts the error if it is transient (retryable). Returns true when the
    /// budget is now exhausted.
    bool record_error(const BackendError& error);

    [[nodiscard]] int gateway_error_count() const noexcept { return gateway_errors_.load(); }
    [[nodiscard]] int budget() const noexcept { return budget_; }
    [[nodiscard]] bool exhausted() const noexcept { return gateway_error_count() >= budget_; }

private:
    int budget_;
    std::atomic<int> gateway_errors_{0};
};

[[nodiscard]] inline int gateway_error_count(const Session& session) noexcept {
    return session.gateway_error_count();
}

} // namespace ttvr::llm
