#include "ttvr/agents/agent.hpp"

namespace ttvr::agents {

AgentRunner::AgentRunner(std::shared_ptr<const TemplateSet> templates, std::string model_name)
    : templates_(templates ? std::move(templates)
                           : std::make_shared<const TemplateSet>(TemplateSet::builtin())),
      model_(std::move(model_name)) {}

AgentResult AgentRunner::run(AgentRole role, const Bindings& bindings, llm::Backend& backend,
                             std::string_view tag_context) const {
    auto prompts = templates_->render(role, bindings);

    llm::CompletionRequest request;
    request.system_prompt = std::move(prompts.system);
    request.user_prompt = std::move(prompts.user);
    request.model_name = model_;
    request.call_tag = std::string(to_string(role));
    if (!tag_context.empty()) {
        request.call_tag += '/';
        request.call_tag += tag_context;
    }

    auto response = backend.complete(request);
    if (!response) {
        return response.error();
    }
    return AgentOutput{role, std::move(response->text), std::move(request.call_tag),
                       std::move(response->backend_id), response->latency};
}

AgentResult run_within_budget(const AgentRunner& runner, AgentRole role,
                              const Bindings& bindings, llm::Backend& backend,
                              llm::Session& session, std::string_view tag_context,
                              const std::function<void(const llm::BackendError&)>& on_error) {
    while (true) {
        auto result = runner.run(role, bindings, backend, tag_context);
        if (result) {
            return result;
        }
        const bool exhausted = session.record_error(result.error());
        if (on_error) {
            on_error(result.error());
        }
        if (!result.error().retryable || exhausted) {
            return result;
        }
    }
}

AgentResult run_agent(AgentRole role, const Bindings& bindings, llm::Backend& backend) {
    static const AgentRunner runner;
    return runner.run(role, bindings, backend);
}

} // namespace ttvr::agents
