#include "ttvr/llm/mock.hpp"

#include "ttvr/core/text.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace ttvr::llm {

namespace match {

Matcher tag_contains(std::string needle) {
    return [needle = std::move(needle)](const CompletionRequest& r) {
        return text::contains(r.call_tag, needle);
    };
}

Matcher prompt_contains(std::string needle) {
    return [needle = std::move(needle)](const CompletionRequest& r) {
        return text::contains(r.system_prompt, needle) || text::contains(r.user_prompt, needle);
    };
}

Matcher user_contains(std::string needle) {
    return [needle = std::move(needle)](const CompletionRequest& r) {
        return text::contains(r.user_prompt, needle);
    };
}

Matcher all_of(std::vector<Matcher> matchers) {
    return [matchers = std::move(matchers)](const CompletionRequest& r) {
        for (const auto& m : matchers) {
            if (!m(r)) {
                return false;
            }
        }
        return true;
    };
}

Matcher any() {
    return [](const CompletionRequest&) { return true; };
}

} // namespace match

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> script, std::string backend_id)
    : script_(std::move(script)), id_(std::move(backend_id)) {
    if (script_.empty()) {
        throw std::invalid_argument("scripted backend needs at least one entry");
    }
    for (const auto& entry : script_) {
        if (!entry.matcher) {
            throw std::invalid_argument("scripted backend entry without a matcher");
        }
    }
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open script file " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("script file " + path.string() + ": " + e.what());
    }
    if (!doc.is_array()) {
        throw std::runtime_error("script file must contain a JSON array");
    }

    std::vector<ScriptEntry> script;
    for (const auto& item : doc) {
        std::vector<Matcher> parts;
        if (item.contains("tag_contains")) {
            parts.push_back(match::tag_contains(item.at("tag_contains").get<std::string>()));
        }
        if (item.contains("prompt_contains")) {
            parts.push_back(match::prompt_contains(item.at("prompt_contains").get<std::string>()));
        }
        if (item.contains("user_contains")) {
            parts.push_back(match::user_contains(item.at("user_contains").get<std::string>()));
        }
        ScriptEntry entry{parts.empty() ? match::any() : match::all_of(std::move(parts)),
                          std::string{}};
        if (item.contains("error")) {
            entry.reply = BackendError::of(parse_error_kind(item.at("error").get<std::string>()),
                                           item.value("detail", std::string("scripted fault")));
        } else if (item.contains("reply")) {
            entry.reply = item.at("reply").get<std::string>();
        } else {
            throw std::runtime_error("script entry needs 'reply' or 'error'");
        }
        script.push_back(std::move(entry));
    }
    return std::make_shared<ScriptedBackend>(std::move(script), "scripted:" + path.filename().string());
}

CompletionResult ScriptedBackend::do_complete(const CompletionRequest& request) {
    for (const auto& entry : script_) {
        if (!entry.matcher(request)) {
            continue;
        }
        if (const auto* error = std::get_if<BackendError>(&entry.reply)) {
            return *error;
        }
        return CompletionResponse{std::get<std::string>(entry.reply), std::chrono::milliseconds{0},
                                  id_};
    }
    return BackendError::of(ErrorKind::Malformed,
                            "no script entry matches call '" + request.call_tag + "'");
}

std::shared_ptr<ScriptedBackend> scripted_backend(std::vector<ScriptEntry> script) {
    return std::make_shared<ScriptedBackend>(std::move(script));
}

FaultInjectingBackend::FaultInjectingBackend(std::shared_ptr<Backend> inner,
                                             std::map<std::size_t, ErrorKind> faults)
    : inner_(std::move(inner)), faults_(std::move(faults)) {
    if (!inner_) {
        throw std::invalid_argument("fault injector needs an inner backend");
    }
}

std::shared_ptr<FaultInjectingBackend> FaultInjectingBackend::failing_calls(
    std::shared_ptr<Backend> inner, std::size_t first, std::size_t last, ErrorKind kind) {
    std::map<std::size_t, ErrorKind> faults;
    for (std::size_t call = first; call <= last; ++call) {
        faults.emplace(call, kind);
    }
    return std::make_shared<FaultInjectingBackend>(std::move(inner), std::move(faults));
}

std::string FaultInjectingBackend::id() const { return "faulty(" + inner_->id() + ")"; }

std::size_t FaultInjectingBackend::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

CompletionResult FaultInjectingBackend::do_complete(const CompletionRequest& request) {
    std::size_t call = 0;
    {
        std::lock_guard lock(mutex_);
        call = ++calls_;
    }
    if (auto it = faults_.find(call); it != faults_.end()) {
        return BackendError::of(it->second, "injected fault on call " + std::to_string(call));
    }
    return inner_->complete(request);
}

RecordingBackend::RecordingBackend(std::shared_ptr<Backend> inner) : inner_(std::move(inner)) {
    if (!inner_) {
        throw std::invalid_argument("recording backend needs an inner backend");
    }
}

std::string RecordingBackend::id() const { return inner_->id(); }

std::vector<CallRecord> RecordingBackend::calls() const {
    std::lock_guard lock(mutex_);
    return log_;
}

std::size_t RecordingBackend::count_tag(std::string_view needle) const {
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (const auto& c : log_) {
        if (text::contains(c.request.call_tag, needle)) {
            ++n;
        }
    }
    return n;
}

void RecordingBackend::clear() {
    std::lock_guard lock(mutex_);
    log_.clear();
}

CompletionResult RecordingBackend::do_complete(const CompletionRequest& request) {
    auto result = inner_->complete(request);
    CallRecord record{request, result.has_value(), {}, std::nullopt};
    if (result) {
        record.text = result->text;
    } else {
        record.error = result.error();
    }
    std::lock_guard lock(mutex_);
    log_.push_back(std::move(record));
    return result;
}

} // namespace ttvr::llm
