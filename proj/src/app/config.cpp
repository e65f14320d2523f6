#include "ttvr/app/config.hpp"

#include "ttvr/llm/mock.hpp"

#include <fstream>
#include <set>

namespace ttvr::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kKnownKeys = {
    "backend",           "endpoint",
    "model",             "api_key_env",
    "timeout_seconds",   "retry_backoff_ms",
    "verbose",           "script",
    "max_iterations",    "gateway_error_budget",
    "verifier_count",    "axiomatize_searchable_steps",
    "backend_profile",   "context_preparer_in_default_mode",
    "template_dir",      "checker_command",
    "checker_timeout_seconds", "checker_error_pattern",
    "checker_source_name", "parallelism",
    "archive",           "archive_sync",
};

template <typename T>
void read(const json& j, const char* key, T& out) {
    const auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    try {
        out = it->get<T>();
    } catch (const json::exception& e) {
        throw llm::ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

fs::path resolve(const fs::path& base, const fs::path& p) {
    return p.is_absolute() ? p : base / p;
}

} // namespace

AppConfig parse_app_config(const json& j, const fs::path& base_dir) {
    if (!j.is_object()) {
        throw llm::ConfigError("config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (kKnownKeys.count(key) == 0) {
            throw llm::ConfigError("unknown config key '" + key + "'");
        }
    }

    AppConfig c;
    read(j, "backend", c.backend);
    if (c.backend != "openai" && c.backend != "script") {
        throw llm::ConfigError("config key 'backend' must be \"openai\" or \"script\"");
    }
    read(j, "endpoint", c.openai.endpoint);
    read(j, "model", c.openai.model);
    read(j, "api_key_env", c.openai.api_key_env);
    int timeout = 900;
    read(j, "timeout_seconds", timeout);
    if (timeout < 1) {
        throw llm::ConfigError("timeout_seconds must be >= 1");
    }
    c.openai.timeout = std::chrono::seconds(timeout);
    int backoff = static_cast<int>(c.openai.retry_backoff.count());
    read(j, "retry_backoff_ms", backoff);
    c.openai.retry_backoff = std::chrono::milliseconds(backoff);
    read(j, "verbose", c.openai.verbose);

    std::string script;
    read(j, "script", script);
    if (c.backend == "script") {
        if (script.empty()) {
            throw llm::ConfigError("backend \"script\" requires config key 'script'");
        }
        c.script_file = resolve(base_dir, script);
    }

    read(j, "max_iterations", c.run.max_iterations);
    read(j, "gateway_error_budget", c.run.gateway_error_budget);
    read(j, "verifier_count", c.run.verifier_count);
    read(j, "axiomatize_searchable_steps", c.run.axiomatize_searchable_steps);
    read(j, "backend_profile", c.run.backend_profile);
    read(j, "context_preparer_in_default_mode", c.run.context_preparer_in_default_mode);
    if (const auto problems = check(c.run); !problems.empty()) {
        throw llm::ConfigError("invalid run settings: " + problems.front());
    }

    std::string templates;
    read(j, "template_dir", templates);
    if (!templates.empty()) {
        c.template_dir = resolve(base_dir, templates);
    }

    std::string checker;
    read(j, "checker_command", checker);
    if (!checker.empty()) {
        certification::CheckerConfig cc;
        try {
            cc.command = certification::split_command(checker);
            // A relative executable path is relative to the config file.
            if (!cc.command.empty() && cc.command.front().find('/') != std::string::npos) {
                cc.command.front() = resolve(base_dir, cc.command.front()).string();
            }
        } catch (const certification::CheckerConfigError& e) {
            throw llm::ConfigError(std::string("checker_command: ") + e.what());
        }
        int seconds = 300;
        read(j, "checker_timeout_seconds", seconds);
        if (seconds < 1) {
            throw llm::ConfigError("checker_timeout_seconds must be >= 1");
        }
        cc.timeout = std::chrono::seconds(seconds);
        read(j, "checker_error_pattern", cc.error_pattern);
        read(j, "checker_source_name", cc.source_file_name);
        c.checker = std::move(cc);
    }

    read(j, "parallelism", c.parallelism);
    if (c.parallelism < 1) {
        throw llm::ConfigError("parallelism must be >= 1");
    }
    std::string archive = c.archive.string();
    read(j, "archive", archive);
    c.archive = resolve(base_dir, archive);
    read(j, "archive_sync", c.archive_sync);
    return c;
}

AppConfig load_app_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw llm::ConfigError("cannot read config file " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw llm::ConfigError("config file " + path.string() + ": " + e.what());
    }
    return parse_app_config(j, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

json describe(const AppConfig& c) {
    json j = {{"backend", c.backend},
              {"parallelism", c.parallelism},
              {"archive", c.archive.string()}};
    if (c.backend == "openai") {
        j["endpoint"] = c.openai.endpoint;
        j["model"] = c.openai.model;
        j["api_key_env"] = c.openai.api_key_env;
        j["timeout_seconds"] =
            std::chrono::duration_cast<std::chrono::seconds>(c.openai.timeout).count();
    } else {
        j["script"] = c.script_file.string();
    }
    if (c.template_dir) {
        j["template_dir"] = c.template_dir->string();
    }
    if (c.checker) {
        j["checker_command"] = c.checker->command;
        j["checker_timeout_seconds"] =
            std::chrono::duration_cast<std::chrono::seconds>(c.checker->timeout).count();
    }
    return j;
}

std::shared_ptr<llm::Backend> make_backend(const AppConfig& config, EventLog log) {
    if (config.backend == "script") {
        try {
            return llm::ScriptedBackend::from_file(config.script_file);
        } catch (const std::runtime_error& e) {
            throw llm::ConfigError(e.what());
        }
    }
    return llm::OpenAIBackend::from_environment(config.openai, std::move(log));
}

agents::TemplateSet load_templates(const AppConfig& config) {
    if (!config.template_dir) {
        return agents::TemplateSet::builtin();
    }
    return agents::TemplateSet::load_directory(*config.template_dir);
}

} // namespace ttvr::app
