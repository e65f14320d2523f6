#pragma once

#include <array>
#include <string_view>

namespace ttvr::agents {

enum class AgentRole {
    ProverFirst,
    ProverRevise,
    VerifierA,
    VerifierB,
    Formalizer,
    LiteratureReviewer,
    ContextPreparer,
    Predictor,
    Refiner,
    Seeder,
};

inline constexpr std::array kAllRoles{
    AgentRole::ProverFirst,     AgentRole::ProverRevise, AgentRole::VerifierA,
    AgentRole::VerifierB,       AgentRole::Formalizer,   AgentRole::LiteratureReviewer,
    AgentRole::ContextPreparer, AgentRole::Predictor,    AgentRole::Refiner,
    AgentRole::Seeder,
};

/// Lower-case identifier ("prover_first", "verifier_b", ...). Used in call
/// tags and as the template file stem.
[[nodiscard]] std::string_view to_string(AgentRole role) noexcept;

/// Throws std::invalid_argument for an unknown name.
[[nodiscard]] AgentRole parse_role(std::string_view name);

[[nodiscard]] constexpr bool is_prover(AgentRole r) noexcept {
    return r == AgentRole::ProverFirst || r == AgentRole::ProverRevise;
}

[[nodiscard]] constexpr bool is_verifier(AgentRole r) noexcept {
    return r == AgentRole::VerifierA || r == AgentRole::VerifierB;
}

} // namespace ttvr::agents
