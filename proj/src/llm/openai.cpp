#include "ttvr/llm/openai.hpp"

#include "ttvr/core/serialize.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <thread>

namespace ttvr::llm {

namespace {

struct SplitUrl {
    std::string origin;
    std::string path;
};

SplitUrl split_endpoint(const std::string& endpoint) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint must start with http:// or https://: " + endpoint);
    }
    const std::string scheme = endpoint.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw ConfigError("unsupported endpoint scheme '" + scheme + "'");
    }
    const auto path_start = endpoint.find('/', scheme_end + 3);
    SplitUrl out;
    out.origin = endpoint.substr(0, path_start);
    out.path = path_start == std::string::npos ? std::string{} : endpoint.substr(path_start);
    while (!out.path.empty() && out.path.back() == '/') {
        out.path.pop_back();
    }
    out.path += "/chat/completions";
    return out;
}

BackendError classify_transport(httplib::Error error) {
    switch (error) {
    case httplib::Error::Read:
    case httplib::Error::Write:
    case httplib::Error::ConnectionTimeout:
        return BackendError::of(ErrorKind::Timeout,
                                "transport timeout: " + httplib::to_string(error));
    default:
        return BackendError::of(ErrorKind::Other, "transport failure: " + httplib::to_string(error));
    }
}

} // namespace

BackendError classify_http_status(int status, std::string_view body) {
    std::string detail = "HTTP " + std::to_string(status);
    if (!body.empty()) {
        detail += ": ";
        detail += body.substr(0, 500);
    }
    switch (status) {
    case 502:
    case 503:
    case 504:
        return BackendError::of(ErrorKind::Gateway, std::move(detail));
    case 408:
        return BackendError::of(ErrorKind::Timeout, std::move(detail));
    case 401:
    case 403:
        return BackendError::of(ErrorKind::Auth, std::move(detail));
    case 400:
    case 404:
    case 422:
        return BackendError::of(ErrorKind::Malformed, std::move(detail));
    default:
        return BackendError::of(ErrorKind::Other, std::move(detail));
    }
}

Result<std::string, BackendError> parse_chat_response(std::string_view body) {
    nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        return BackendError::of(ErrorKind::Malformed, "response body is not a JSON object");
    }
    auto choices = doc.find("choices");
    if (choices == doc.end() || !choices->is_array() || choices->empty()) {
        return BackendError::of(ErrorKind::Malformed, "response has no choices");
    }
    const auto& first = (*choices)[0];
    if (!first.is_object() || !first.contains("message") || !first["message"].is_object()) {
        return BackendError::of(ErrorKind::Malformed, "choice has no message");
    }
    const auto& content = first["message"].value("content", nlohmann::json());
    if (content.is_null()) {
        return std::string{};
    }
    if (!content.is_string()) {
        return BackendError::of(ErrorKind::Malformed, "message content is not text");
    }
    return content.get<std::string>();
}

std::shared_ptr<OpenAIBackend> OpenAIBackend::from_environment(OpenAIConfig config, EventLog log) {
    const char* key = std::getenv(config.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
        throw ConfigError("credential environment variable " + config.api_key_env + " is not set");
    }
    return std::make_shared<OpenAIBackend>(std::move(config), key, std::move(log));
}

OpenAIBackend::OpenAIBackend(OpenAIConfig config, std::string api_key, EventLog log)
    : config_(std::move(config)), api_key_(std::move(api_key)), log_(std::move(log)) {
    auto url = split_endpoint(config_.endpoint);
    origin_ = std::move(url.origin);
    path_ = std::move(url.path);
}

std::string OpenAIBackend::id() const { return "openai:" + config_.model; }

CompletionResult OpenAIBackend::do_complete(const CompletionRequest& request) {
    auto result = attempt(request);
    if (!result && result.error().retryable) {
        log_.warn("transient backend error, retrying once",
                  {{"call_tag", request.call_tag}, {"kind", to_string(result.error().kind)}});
        std::this_thread::sleep_for(config_.retry_backoff);
        result = attempt(request);
    }
    return result;
}

CompletionResult OpenAIBackend::attempt(const CompletionRequest& request) {
    const std::string model = request.model_name.empty() ? config_.model : request.model_name;
    nlohmann::json body = {
        {"model", model},
        {"messages",
         nlohmann::json::array({{{"role", "system"}, {"content", request.system_prompt}},
                                {{"role", "user"}, {"content", request.user_prompt}}})},
        {"stream", false}};
    const std::string payload = dump_line(body);

    if (config_.verbose) {
        log_.emit("http_request", {{"call_tag", request.call_tag},
                                   {"url", origin_ + path_},
                                   {"authorization", "Bearer ***"},
                                   {"body", body}});
    }

    httplib::Client client(origin_);
    const auto sec = static_cast<time_t>(config_.timeout.count() / 1000);
    const auto usec = static_cast<time_t>((config_.timeout.count() % 1000) * 1000);
    client.set_connection_timeout(sec, usec);
    client.set_read_timeout(sec, usec);
    client.set_write_timeout(sec, usec);
    httplib::Headers headers;
    if (!api_key_.empty()) {
        headers.emplace("Authorization", "Bearer " + api_key_);
    }

    const auto started = std::chrono::steady_clock::now();
    auto response = client.Post(path_, headers, payload, "application/json");
    const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);

    if (!response) {
        return classify_transport(response.error());
    }
    if (config_.verbose) {
        log_.emit("http_response", {{"call_tag", request.call_tag},
                                    {"status", response->status},
                                    {"body", response->body}});
    }
    if (response->status < 200 || response->status >= 300) {
        return classify_http_status(response->status, response->body);
    }

    auto text = parse_chat_response(response->body);
    if (!text) {
        return text.error();
    }
    if (text->empty()) {
        log_.warn("backend returned empty content", {{"call_tag", request.call_tag}});
    }
    return CompletionResponse{std::move(*text), latency, id()};
}

} // namespace ttvr::llm
