#include "ttvr/agents/statement_text.hpp"
#include "ttvr/certification/certification.hpp"
#include "ttvr/core/text.hpp"

namespace ttvr::certification {

std::string strip_code_fence(std::string_view text) {
    const auto lines = text::lines(text);
    std::size_t open = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (text::trim(lines[i]).substr(0, 3) == "```") {
            open = i;
            break;
        }
    }
    if (open == lines.size()) {
        return std::string(text::trim(text));
    }
    std::string out;
    for (std::size_t i = open + 1; i < lines.size(); ++i) {
        if (text::trim(lines[i]).substr(0, 3) == "```") {
            break;
        }
        out.append(lines[i]);
        out.push_back('\n');
    }
    return std::string(text::trim(out));
}

int count_axioms(std::string_view source) {
    int n = 0;
    for (auto line : text::lines(source)) {
        auto t = text::trim(line);
        for (std::string_view prefix : {"private ", "protected ", "noncomputable "}) {
            if (t.substr(0, prefix.size()) == prefix) {
                t = text::trim(t.substr(prefix.size()));
            }
        }
        if (t.substr(0, 5) == "axiom" && t.size() > 5 && text::is_space(t[5])) {
            ++n;
        }
    }
    return n;
}

DeclaredRestatement extract_restatement(std::string_view source) {
    DeclaredRestatement out;
    enum class Block { None, Premises, Conclusion } block = Block::None;
    for (auto line : text::lines(source)) {
        auto t = text::trim(line);
        if (t.substr(0, 2) != "--") {
            if (block != Block::None && !t.empty()) {
                block = Block::None;
            }
            continue;
        }
        const auto body = text::trim(t.substr(2));
        if (body == "BEGIN PREMISES") {
            block = Block::Premises;
            out.premises_block_found = true;
        } else if (body == "BEGIN CONCLUSION") {
            block = Block::Conclusion;
            out.conclusion_block_found = true;
        } else if (body == "END PREMISES" || body == "END CONCLUSION") {
            block = Block::None;
        } else if (!body.empty() && block == Block::Premises) {
            out.premises.emplace_back(body);
        } else if (!body.empty() && block == Block::Conclusion) {
            out.conclusion.emplace_back(body);
        }
    }
    return out;
}

Result<Formalization, llm::BackendError>
formalize(const TheoremStatement& statement, const ProofAttempt& accepted_proof,
          const RunConfig& config, llm::Backend& backend, llm::Session& session,
          const FormalizeOptions& options) {
    validate(statement);
    validate(accepted_proof);
    const auto runner =
        options.runner ? options.runner : std::make_shared<const agents::AgentRunner>();

    agents::Bindings bindings{
        {"statement", agents::format_statement(statement, options.notation_preamble)},
        {"proof", accepted_proof.body}};
    if (config.axiomatize_searchable_steps) {
        bindings.emplace("axiomatization", std::string(kAxiomatizationInstruction));
    }

    auto result = agents::run_within_budget(*runner, agents::AgentRole::Formalizer, bindings,
                                            backend, session, options.tag_context);
    if (!result) {
        return result.error();
    }

    Formalization out;
    out.raw_output = result->text;
    out.call_tag = result->call_tag;
    out.artifact.source_text = strip_code_fence(result->text);
    out.artifact.checker_outcome = CheckerOutcome::NotRun;
    if (out.artifact.source_text.empty()) {
        out.failure = "formalizer returned no source";
        return out;
    }
    out.artifact.axiomatized_steps = count_axioms(out.artifact.source_text);
    return out;
}

} // namespace ttvr::certification
