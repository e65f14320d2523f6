#include "ttvr/llm/backend.hpp"

#include <array>
#include <stdexcept>

namespace ttvr::llm {

BackendError BackendError::of(ErrorKind kind, std::string detail) {
    const bool retryable = kind == ErrorKind::Gateway || kind == ErrorKind::Timeout;
    return BackendError{kind, std::move(detail), retryable};
}

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Gateway: return "GATEWAY";
    case ErrorKind::Timeout: return "TIMEOUT";
    case ErrorKind::Auth: return "AUTH";
    case ErrorKind::Malformed: return "MALFORMED";
    case ErrorKind::Other: return "OTHER";
    }
    return "?";
}

ErrorKind parse_error_kind(std::string_view name) {
    for (ErrorKind k : std::array{ErrorKind::Gateway, ErrorKind::Timeout, ErrorKind::Auth,
                                  ErrorKind::Malformed, ErrorKind::Other}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown backend error kind '" + std::string(name) + "'");
}

CompletionResult Backend::complete(const CompletionRequest& request) {
    if (request.system_prompt.empty() || request.user_prompt.empty()) {
        throw std::invalid_argument("completion request needs both a system and a user prompt (" +
                                    request.call_tag + ")");
    }
    return do_complete(request);
}

Session::Session(int gateway_error_budget) : budget_(gateway_error_budget) {
    if (gateway_error_budget < 1) {
        throw std::invalid_argument("gateway error budget must be >= 1");
    }
}

bool Session::record_error(const BackendError& error) {
    if (error.retryable) {
        gateway_errors_.fetch_add(1);
    }
    return exhausted();
}

} // namespace ttvr::llm
