#pragma once

#include "ttvr/agents/roles.hpp"
#include "ttvr/agents/templates.hpp"
#include "ttvr/llm/backend.hpp"

#include <chrono>
#include <functional>
#include <memory>
#include <string>

namespace ttvr::agents {

struct AgentOutput {
    AgentRole role = AgentRole::ProverFirst;
    std::string text;
    std::string call_tag;
    std::string backend_id;
    std::chrono::milliseconds latency{0};
};

using AgentResult = Result<AgentOutput, llm::BackendError>;

/// Creates single-use agents: each run() renders the role's prompts and
/// issues exactly one backend call. No conversation state exists between
/// calls; two agents never share context.
class AgentRunner {
public:
    explicit AgentRunner(std::shared_ptr<const TemplateSet> templates = nullptr,
                         std::string model_name = {});

    /// `tag_context` is appended to the role name in the call tag, e.g.
    /// "it=2/run=1a2b3c4d". Throws RenderError when bindings are incomplete.
    [[nodiscard]] AgentResult run(AgentRole role, const Bindings& bindings, llm::Backend& backend,
                                  std::string_view tag_context = {}) const;

    [[nodiscard]] const TemplateSet& templates() const noexcept { return *templates_; }
    [[nodiscard]] const std::string& model_name() const noexcept { return model_; }

private:
    std::shared_ptr<const TemplateSet> templates_;
    std::string model_;
};

/// Runs the agent; after a retryable error the session is charged and a
/// fresh agent is started, until the session's budget is spent. Returns the
/// first non-retryable error, or the error that spent the budget.
[[nodiscard]] AgentResult run_within_budget(
    const AgentRunner& runner, AgentRole role, const Bindings& bindings, llm::Backend& backend,
    llm::Session& session, std::string_view tag_context = {},
    const std::function<void(const llm::BackendError&)>& on_error = {});

/// One agent call with the built-in templates.
[[nodiscard]] AgentResult run_agent(AgentRole role, const Bindings& bindings,
                                    llm::Backend& backend);

} // namespace ttvr::agents
