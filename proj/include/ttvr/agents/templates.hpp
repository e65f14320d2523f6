#pragma once

#include "ttvr/agents/roles.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttvr::agents {

using Bindings = std::map<std::string, std::string, std::less<>>;

class TemplateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a required placeholder has no binding.
class RenderError : public std::runtime_error {
public:
    RenderError(std::string placeholder, std::string message)
        : std::runtime_error(std::move(message)), placeholder_(std::move(placeholder)) {}

    [[nodiscard]] const std::string& placeholder() const noexcept { return placeholder_; }

private:
    std::string placeholder_;
};

struct PromptTemplate {
    AgentRole role = AgentRole::ProverFirst;
    std::string system_template;
    std::string user_template;
    std::set<std::string, std::less<>> required_placeholders;
    /// Known but optional; rendered as empty text when unbound.
    std::set<std::string, std::less<>> optional_placeholders;
};

struct RenderedPrompts {
    std::string system;
    std::string user;
};

/// Placeholder names accepted in a role's template.
[[nodiscard]] const std::set<std::string, std::less<>>& required_placeholders(AgentRole role);
[[nodiscard]] const std::set<std::string, std::less<>>& optional_placeholders(AgentRole role);

/// Every {{name}} occurrence in `text`, in order of appearance.
[[nodiscard]] std::vector<std::string> placeholders_in(std::string_view text);

/// One template per role. Template files are plain text:
///
///     # comment lines before the first section are ignored
///     [system]
///     ... {{placeholder}} ...
///     [user]
///     ... {{placeholder}} ...
class TemplateSet {
public:
    /// Built-in defaults for every role.
    static TemplateSet builtin();

    /// Reads `<role>.txt` for each role from `dir`; roles without a file keep
    /// the built-in default. Throws TemplateError for unknown placeholders,
    /// missing required placeholders or a malformed file.
    static TemplateSet load_directory(const std::filesystem::path& dir);

    static PromptTemplate parse(AgentRole role, std::string_view file_text);
    [[nodiscard]] static std::string serialize(const PromptTemplate& tmpl);

    void write_directory(const std::filesystem::path& dir) const;

    [[nodiscard]] const PromptTemplate& get(AgentRole role) const;
    void set(PromptTemplate tmpl);

    /// Pure substitution of bindings into the role's template.
    [[nodiscard]] RenderedPrompts render(AgentRole role, const Bindings& bindings) const;

    /// role name -> serialized template text; archived with results.
    [[nodiscard]] std::map<std::string, std::string> snapshot() const;

private:
    std::map<AgentRole, PromptTemplate> templates_;
};

/// Renders with the built-in template set.
[[nodiscard]] RenderedPrompts render_prompts(AgentRole role, const Bindings& bindings);

} // namespace ttvr::agents
