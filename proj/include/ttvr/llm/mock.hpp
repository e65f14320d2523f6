#pragma once

#include "ttvr/llm/backend.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ttvr::llm {

using Matcher = std::function<bool(const CompletionRequest&)>;

namespace match {

[[nodiscard]] Matcher tag_contains(std::string needle);
/// Matches either the system or the user prompt.
[[nodiscard]] Matcher prompt_contains(std::string needle);
[[nodiscard]] Matcher user_contains(std::string needle);
[[nodiscard]] Matcher all_of(std::vector<Matcher> matchers);
[[nodiscard]] Matcher any();

} // namespace match

struct ScriptEntry {
    Matcher matcher;
    std::variant<std::string, BackendError> reply;
};

/// Answers each request with the reply of the first matching entry. Holds
/// no per-call state, so responses depend only on the request.
class ScriptedBackend final : public Backend {
public:
    /// Throws std::invalid_argument for an empty script.
    explicit ScriptedBackend(std::vector<ScriptEntry> script, std::string backend_id = "scripted");

    /// Loads a JSON array of {"tag_contains"?, "prompt_contains"?,
    /// "user_contains"?, "reply" | "error"} objects.
    static std::shared_ptr<ScriptedBackend> from_file(const std::filesystem::path& path);

    [[nodiscard]] std::string id() const override { return id_; }

private:
    CompletionResult do_complete(const CompletionRequest& request) override;

    std::vector<ScriptEntry> script_;
    std::string id_;
};

[[nodiscard]] std::shared_ptr<ScriptedBackend> scripted_backend(std::vector<ScriptEntry> script);

/// Decorator that fails selected calls (1-based, counted across all calls
/// through this instance) with the configured error kind.
class FaultInjectingBackend final : public Backend {
public:
    FaultInjectingBackend(std::shared_ptr<Backend> inner, std::map<std::size_t, ErrorKind> faults);

    /// Fails calls first..last (inclusive) with `kind`.
    static std::shared_ptr<FaultInjectingBackend> failing_calls(std::shared_ptr<Backend> inner,
                                                                std::size_t first,
                                                                std::size_t last,
                                                                ErrorKind kind);

    [[nodiscard]] std::string id() const override;
    [[nodiscard]] std::size_t calls() const;

private:
    CompletionResult do_complete(const CompletionRequest& request) override;

    std::shared_ptr<Backend> inner_;
    std::map<std::size_t, ErrorKind> faults_;
    mutable std::mutex mutex_;
    std::size_t calls_ = 0;
};

struct CallRecord {
    CompletionRequest request;
    bool ok = false;
    std::string text;
    std::optional<BackendError> error;
};

/// Decorator that keeps a log of every call for later assertions.
class RecordingBackend final : public Backend {
public:
    explicit RecordingBackend(std::shared_ptr<Backend> inner);

    [[nodiscard]] std::string id() const override;
    [[nodiscard]] std::vector<CallRecord> calls() const;
    [[nodiscard]] std::size_t count_tag(std::string_view needle) const;
    void clear();

private:
    CompletionResult do_complete(const CompletionRequest& request) override;

    std::shared_ptr<Backend> inner_;
    mutable std::mutex mutex_;
    std::vector<CallRecord> log_;
};

} // namespace ttvr::llm
