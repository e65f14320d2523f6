#pragma once

#include "ttvr/agents/agent.hpp"
#include "ttvr/core/log.hpp"
#include "ttvr/core/model.hpp"
#include "ttvr/llm/backend.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttvr::engine {

enum class IterationOutcome { Accepted, Rejected, Errored };

[[nodiscard]] std::string_view to_string(IterationOutcome value) noexcept;
[[nodiscard]] IterationOutcome parse_iteration_outcome(std::string_view name);

struct IterationRecord {
    int index = 1;
    ProofAttempt attempt;
    /// Ordered by verifier_index. Shorter than verifier_count when verifier A
    /// rejected (B is not consulted) or the run aborted mid-iteration.
    std::vector<VerifierVerdict> verdicts;
    IterationOutcome outcome = IterationOutcome::Rejected;
    /// Verifier outputs that failed to parse in this iteration.
    int malformed_verdicts = 0;

    bool operator==(const IterationRecord&) const = default;
};

struct RunTrace {
    std::string statement_fingerprint;
    std::string statement_id;
    RunConfig config;
    std::vector<IterationRecord> iterations;
    ProofStatus terminal = ProofStatus::Exhausted;
    int gateway_errors = 0;
    int difficulty_index = 0;
    std::optional<llm::BackendError> abort_error;

    bool operator==(const RunTrace&) const = default;

    /// Last iteration's proof when the run ended in acceptance.
    [[nodiscard]] const ProofAttempt* accepted_proof() const;
};

class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct EngineOptions {
    std::shared_ptr<const agents::AgentRunner> runner;
    EventLog log;
    /// Prepended to the statement in every prompt of the run.
    std::string notation_preamble;
};

/// Runs the prover/verifier loop for one statement.
///
/// Iteration 1 uses PROVER_FIRST, later iterations PROVER_REVISE with the
/// previous proof, position and evidence. Verifier A runs first; verifier B
/// only if A accepted. The loop stops at the first iteration accepted by all
/// configured verifiers (PROVED_UNCERTIFIED), after N iterations
/// (EXHAUSTED), or when the session's transient-error count reaches M or a
/// non-retryable backend error occurs (ABORTED).
[[nodiscard]] RunTrace run_ttvr(const TheoremStatement& statement, const RunConfig& config,
                                llm::Backend& backend, llm::Session& session,
                                const EngineOptions& options = {});

/// Same, with a fresh session sized by config.gateway_error_budget.
[[nodiscard]] RunTrace run_ttvr(const TheoremStatement& statement, const RunConfig& config,
                                llm::Backend& backend, const EngineOptions& options = {});

/// Prompt bindings for the revising prover. The first REJECT verdict (in
/// verifier order) supplies evidence and position. Throws ContractViolation
/// unless `previous` was rejected.
[[nodiscard]] agents::Bindings revise_bindings(const IterationRecord& previous,
                                               const TheoremStatement& statement,
                                               std::string_view notation_preamble = {});

[[nodiscard]] int difficulty_index(const RunTrace& trace) noexcept;

/// Structural invariants of a finished trace; empty when all hold.
[[nodiscard]] std::vector<std::string> check(const RunTrace& trace);

} // namespace ttvr::engine
