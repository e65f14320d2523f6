#include "ttvr/core/log.hpp"

#include "ttvr/core/model.hpp"

#include <ostream>

namespace ttvr {

EventLog::EventLog(std::ostream& out) : out_(&out) {}

void EventLog::emit(std::string_view event, nlohmann::json fields) const {
    if (out_ == nullptr) {
        return;
    }
    if (!fields.is_object()) {
        fields = nlohmann::json{{"value", std::move(fields)}};
    }
    fields["event"] = std::string(event);
    fields["ts"] = utc_timestamp();
    const std::string line = fields.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    std::lock_guard lock(*mutex_);
    *out_ << line << '\n';
    out_->flush();
}

void EventLog::warn(std::string_view message, nlohmann::json fields) const {
    if (!fields.is_object()) {
        fields = nlohmann::json::object();
    }
    fields["message"] = std::string(message);
    emit("warning", std::move(fields));
}

} // namespace ttvr
