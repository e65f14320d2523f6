#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ttvr {

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> problems);

    [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

enum class StatementSource { UserSupplied, ResearchMode };

/// A theorem statement T: ordered premises plus a conclusion, both in
/// semi-formal natural language. Premise order is significant.
struct TheoremStatement {
    std::string id;
    std::vector<std::string> premises;
    std::string conclusion;
    StatementSource source = StatementSource::UserSupplied;
    std::optional<std::string> goal_tag;

    bool operator==(const TheoremStatement&) const = default;
};

/// Candidate proof P_i.
struct ProofAttempt {
    int iteration = 1;
    std::string body;
    std::string produced_by;

    bool operator==(const ProofAttempt&) const = default;
};

enum class Decision { Accept, Reject };

/// Location p_i of a flaw: a step label and a verbatim excerpt of the proof.
struct ProofPosition {
    std::string step_label;
    std::string quote;

    bool operator==(const ProofPosition&) const = default;
};

struct VerifierVerdict {
    Decision decision = Decision::Accept;
    std::optional<std::string> evidence;
    std::optional<ProofPosition> position;
    int verifier_index = 1;

    bool operator==(const VerifierVerdict&) const = default;

    [[nodiscard]] bool accepted() const noexcept { return decision == Decision::Accept; }
};

enum class CheckerOutcome { Certified, Failed, NotRun };

/// Proof-assistant source and what the external checker said about it.
struct FormalArtifact {
    std::string source_text;
    CheckerOutcome checker_outcome = CheckerOutcome::NotRun;
    std::string checker_log;
    int axiomatized_steps = 0;

    bool operator==(const FormalArtifact&) const = default;
};

enum class ReviewDecision { Conformant, Nonconformant, Pending };

class ImmutableDecisionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Human conformance review. Starts PENDING and may be decided exactly once.
struct ConformanceDecision {
    std::string reviewer;
    ReviewDecision decision = ReviewDecision::Pending;
    std::string notes;
    std::string timestamp;

    bool operator==(const ConformanceDecision&) const = default;

    [[nodiscard]] bool pending() const noexcept { return decision == ReviewDecision::Pending; }

    /// Returns the decided copy; throws ImmutableDecisionError unless pending
    /// and std::invalid_argument if `outcome` is PENDING.
    [[nodiscard]] ConformanceDecision decide(ReviewDecision outcome, std::string reviewer_id,
                                             std::string review_notes,
                                             std::string at) const;
};

struct RunConfig {
    int max_iterations = 15;
    int gateway_error_budget = 5;
    int verifier_count = 2;
    bool axiomatize_searchable_steps = false;
    std::string backend_profile = "default";
    /// Run the context preparer before TTVR in default mode (for conjectures).
    bool context_preparer_in_default_mode = false;

    bool operator==(const RunConfig&) const = default;
};

enum class ProofStatus { ProvedUncertified, Valid, Rejected, Exhausted, Aborted };

[[nodiscard]] RunConfig default_run_config();

// Invariant checks. Each returns the list of violated invariants (empty = ok).
[[nodiscard]] std::vector<std::string> check(const TheoremStatement& statement);
[[nodiscard]] std::vector<std::string> check(const ProofAttempt& attempt);
[[nodiscard]] std::vector<std::string> check(const FormalArtifact& artifact);
[[nodiscard]] std::vector<std::string> check(const RunConfig& config);

/// Throws ValidationError listing every violation.
void validate(const TheoremStatement& statement);
void validate(const ProofAttempt& attempt);
void validate(const FormalArtifact& artifact);
void validate(const RunConfig& config);

struct Violation {
    std::string field;
    std::string message;

    bool operator==(const Violation&) const = default;
};

/// Checks a verdict against its own invariants and against the proof it
/// refers to (the quote must occur verbatim in the proof body). Never throws.
[[nodiscard]] std::vector<Violation> validate_verdict(const VerifierVerdict& verdict,
                                                      const ProofAttempt& proof);

/// SHA-256 (hex) over a length-prefixed encoding of premises and conclusion,
/// in order. Throws ValidationError for an invalid statement.
[[nodiscard]] std::string statement_fingerprint(const TheoremStatement& statement);

/// Lowercase hex SHA-256 of `data`.
[[nodiscard]] std::string sha256_hex(std::string_view data);

[[nodiscard]] std::string_view to_string(StatementSource value) noexcept;
[[nodiscard]] std::string_view to_string(Decision value) noexcept;
[[nodiscard]] std::string_view to_string(CheckerOutcome value) noexcept;
[[nodiscard]] std::string_view to_string(ReviewDecision value) noexcept;
[[nodiscard]] std::string_view to_string(ProofStatus value) noexcept;

// Inverse of to_string; throw std::invalid_argument on unknown names.
[[nodiscard]] StatementSource parse_statement_source(std::string_view name);
[[nodiscard]] Decision parse_decision(std::string_view name);
[[nodiscard]] CheckerOutcome parse_checker_outcome(std::string_view name);
[[nodiscard]] ReviewDecision parse_review_decision(std::string_view name);
[[nodiscard]] ProofStatus parse_proof_status(std::string_view name);

/// Current UTC time as ISO-8601 with millisecond precision.
[[nodiscard]] std::string utc_timestamp();

} // namespace ttvr
