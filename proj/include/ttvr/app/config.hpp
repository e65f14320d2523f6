#pragma once

#include "ttvr/agents/templates.hpp"
#include "ttvr/certification/certification.hpp"
#include "ttvr/core/log.hpp"
#include "ttvr/core/model.hpp"
#include "ttvr/llm/openai.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace ttvr::app {

/// Settings read from the JSON config file. Relative paths are resolved
/// against the directory containing the file.
struct AppConfig {
    RunConfig run;
    /// "openai" for a live endpoint, "script" for a scripted mock backend.
    std::string backend = "openai";
    llm::OpenAIConfig openai;
    std::filesystem::path script_file;
    std::optional<std::filesystem::path> template_dir;
    std::optional<certification::CheckerConfig> checker;
    int parallelism = 1;
    std::filesystem::path archive = "ttvr-archive.jsonl";
    bool archive_sync = true;
};

/// Throws llm::ConfigError naming the offending key.
[[nodiscard]] AppConfig load_app_config(const std::filesystem::path& path);
[[nodiscard]] AppConfig parse_app_config(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir);

/// Config as archived with each batch (never contains the credential).
[[nodiscard]] nlohmann::json describe(const AppConfig& config);

[[nodiscard]] std::shared_ptr<llm::Backend> make_backend(const AppConfig& config,
                                                         EventLog log = {});
[[nodiscard]] agents::TemplateSet load_templates(const AppConfig& config);

} // namespace ttvr::app
