#pragma once

#include "ttvr/agents/agent.hpp"
#include "ttvr/core/model.hpp"
#include "ttvr/core/serialize.hpp"
#include "ttvr/llm/backend.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttvr::certification {

/// Bound into the formalizer prompt when config.axiomatize_searchable_steps
/// is set.
inline constexpr std::string_view kAxiomatizationInstruction =
    "Reduce to an `axiom` every proof step that can be established by searching the literature "
    "or by a routine computation, give each such axiom a descriptive name, and formalize the "
    "remaining argument in full.";

struct Formalization {
    FormalArtifact artifact;
    /// Set when the formalizer produced no usable source; the artifact then
    /// stays NOT_RUN.
    std::optional<std::string> failure;
    std::string raw_output;
    std::string call_tag;
};

struct FormalizeOptions {
    std::shared_ptr<const agents::AgentRunner> runner;
    std::string notation_preamble;
    std::string tag_context;
};

/// One FORMALIZER call on an accepted proof. Transient errors are charged to
/// `session` and retried like any other agent call.
[[nodiscard]] Result<Formalization, llm::BackendError>
formalize(const TheoremStatement& statement, const ProofAttempt& accepted_proof,
          const RunConfig& config, llm::Backend& backend, llm::Session& session,
          const FormalizeOptions& options = {});

/// Contents of the first fenced code block, or the whole text trimmed.
[[nodiscard]] std::string strip_code_fence(std::string_view text);

/// Number of lines declaring an `axiom`.
[[nodiscard]] int count_axioms(std::string_view source);

/// Premises and conclusion the artifact declares in its structured comment
/// blocks (`-- BEGIN PREMISES` ... `-- END PREMISES`, likewise CONCLUSION).
struct DeclaredRestatement {
    std::vector<std::string> premises;
    std::vector<std::string> conclusion;
    bool premises_block_found = false;
    bool conclusion_block_found = false;
};

[[nodiscard]] DeclaredRestatement extract_restatement(std::string_view source);

class CheckerConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CheckerConfig {
    /// argv of the checker. Arguments may contain `{source}` (path of the
    /// source file) and `{sandbox}` (the working directory).
    std::vector<std::string> command;
    std::chrono::milliseconds timeout{std::chrono::seconds(300)};
    /// Output containing this text counts as an error diagnostic even on
    /// exit status 0. Empty disables the check.
    std::string error_pattern = "error:";
    std::string source_file_name = "Proof.lean";
    bool keep_sandbox = false;
};

/// Splits a command line on whitespace; single or double quotes group words.
[[nodiscard]] std::vector<std::string> split_command(std::string_view command_line);

/// Runs the checker on the artifact's source in a fresh sandbox directory.
/// Exit status 0 without error diagnostics gives CERTIFIED, anything else
/// FAILED; the combined output plus a status line becomes the checker log.
/// Throws CheckerConfigError when the executable cannot be found and
/// std::invalid_argument when the source is empty.
[[nodiscard]] FormalArtifact run_checker(FormalArtifact artifact, const CheckerConfig& config);

struct CertificationCase {
    std::string case_id;
    TheoremStatement statement;
    ProofAttempt accepted_proof;
    FormalArtifact artifact;
    ConformanceDecision review;
    ProofStatus final_status = ProofStatus::ProvedUncertified;
    std::optional<std::string> formalization_failure;
    /// Free-form human judgement of the informal proof (e.g. "Y", "N", "?").
    /// Independent of the conformance review.
    std::optional<std::string> correct_annotation;

    bool operator==(const CertificationCase&) const = default;
};

/// Stable id derived from the statement fingerprint and the proof text.
[[nodiscard]] std::string make_case_id(const TheoremStatement& statement,
                                       const ProofAttempt& proof);

[[nodiscard]] CertificationCase open_case(const TheoremStatement& statement,
                                          const ProofAttempt& accepted_proof,
                                          FormalArtifact artifact,
                                          std::optional<std::string> formalization_failure = {});

/// Final status from checker outcome and review decision:
///   CERTIFIED + CONFORMANT     -> VALID
///   CERTIFIED + NONCONFORMANT  -> REJECTED
///   FAILED    + any            -> REJECTED
///   otherwise                  -> PROVED_UNCERTIFIED
[[nodiscard]] ProofStatus decide_validity(CheckerOutcome checker, ReviewDecision review) noexcept;
[[nodiscard]] ProofStatus decide_validity(const CertificationCase& c) noexcept;

/// Records the reviewer's decision and recomputes the final status. Throws
/// ImmutableDecisionError if the case was already reviewed.
[[nodiscard]] CertificationCase submit_review(const CertificationCase& c, ReviewDecision decision,
                                              std::string reviewer, std::string notes = {});

/// Side-by-side text of the statement and the artifact's declared
/// restatement, as shown to the reviewer. The proof body is not shown.
[[nodiscard]] std::string review_view(const CertificationCase& c);

[[nodiscard]] std::vector<std::string> check(const CertificationCase& c);

void to_json(nlohmann::json& j, const CertificationCase& v);
void from_json(const nlohmann::json& j, CertificationCase& v);

} // namespace ttvr::certification

namespace ttvr {
template <> struct RecordType<certification::CertificationCase> { static constexpr std::string_view name = "certification_case"; };
} // namespace ttvr
