#include "ttvr/agents/statement_text.hpp"

#include "ttvr/core/text.hpp"

namespace ttvr::agents {

std::string format_statement(const TheoremStatement& statement,
                             std::string_view notation_preamble) {
    std::string out;
    const auto preamble = text::trim(notation_preamble);
    if (!preamble.empty()) {
        out += "Notation:\n";
        out += preamble;
        out += "\n\n";
    }
    if (statement.premises.empty()) {
        out += "Premises: none.\n";
    } else {
        out += "Premises:\n";
        for (std::size_t i = 0; i < statement.premises.size(); ++i) {
            out += std::to_string(i + 1) + ". " + statement.premises[i] + "\n";
        }
    }
    out += "Conclusion: " + statement.conclusion;
    return out;
}

std::string format_position(const ProofPosition& position) {
    return position.step_label + " | \"" + position.quote + "\"";
}

} // namespace ttvr::agents
