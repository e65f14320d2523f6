#pragma once

#include "ttvr/core/model.hpp"

#include <string>
#include <string_view>

namespace ttvr::agents {

/// Prompt rendering of a statement:
///
///     Notation:            (only when a preamble is given)
///     <preamble>
///
///     Premises:
///     1. <premise>
///     Conclusion: <conclusion>
[[nodiscard]] std::string format_statement(const TheoremStatement& statement,
                                           std::string_view notation_preamble = {});

[[nodiscard]] std::string format_position(const ProofPosition& position);

} // namespace ttvr::agents
