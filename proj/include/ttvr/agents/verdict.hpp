#pragma once

#include "ttvr/core/model.hpp"
#include "ttvr/core/result.hpp"

#include <string>
#include <string_view>

namespace ttvr::agents {

struct MalformedVerdict {
    std::string reason;
};

/// Verifier output grammar:
///
///     VERDICT: ACCEPT
///
/// or
///
///     VERDICT: REJECT
///     POSITION: <step label> | "<verbatim quote>"
///     EVIDENCE: <explanation, may span the remaining lines>
///
/// The first line whose trimmed text starts with "VERDICT:" decides. Text
/// before it is ignored. On ACCEPT anything after the marker is ignored.
/// A REJECT whose quote does not occur in `proof` is malformed.
[[nodiscard]] Result<VerifierVerdict, MalformedVerdict> parse_verdict(std::string_view raw,
                                                                      const ProofAttempt& proof,
                                                                      int verifier_index = 1);

/// Renders a verdict in the grammar above.
[[nodiscard]] std::string format_verdict(const VerifierVerdict& verdict);

/// Stand-in rejection used when a verifier's output stays unparseable after
/// the re-query. Its position quotes the start of the proof so that it still
/// passes validate_verdict.
[[nodiscard]] VerifierVerdict unparseable_verdict(const ProofAttempt& proof, int verifier_index);

inline constexpr std::string_view kUnparseableEvidence = "verifier output unparseable";

} // namespace ttvr::agents
