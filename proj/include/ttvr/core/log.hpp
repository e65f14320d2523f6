#pragma once

#include <json.hpp>

#include <iosfwd>
#include <memory>
#include <mutex>
#include <string_view>

namespace ttvr {

/// Thread-safe sink for structured one-line JSON events (progress, warnings,
/// verbose wire dumps). A default-constructed logger discards everything.
class EventLog {
public:
    EventLog() = default;
    explicit EventLog(std::ostream& out);

    void emit(std::string_view event, nlohmann::json fields = nlohmann::json::object()) const;
    void warn(std::string_view message, nlohmann::json fields = nlohmann::json::object()) const;

    [[nodiscard]] bool enabled() const noexcept { return out_ != nullptr; }

private:
    std::ostream* out_ = nullptr;
    std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
};

} // namespace ttvr
