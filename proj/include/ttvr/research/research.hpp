#pragma once

#include "ttvr/agents/agent.hpp"
#include "ttvr/core/log.hpp"
#include "ttvr/core/model.hpp"
#include "ttvr/core/serialize.hpp"
#include "ttvr/engine/batch.hpp"
#include "ttvr/llm/backend.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttvr::research {

struct ResearchGoal {
    std::string guideline;
    std::string field_tag;
};

void validate(const ResearchGoal& goal);

enum class CandidateOrigin { Seeder, LiteratureReviewer, Predictor };
enum class Resolution { Proved, Refuted, Unsettled };

[[nodiscard]] std::string_view to_string(CandidateOrigin value) noexcept;
[[nodiscard]] std::string_view to_string(Resolution value) noexcept;
[[nodiscard]] CandidateOrigin parse_candidate_origin(std::string_view name);
[[nodiscard]] Resolution parse_resolution(std::string_view name);

struct ConjectureCandidate {
    std::string title;
    TheoremStatement statement;
    CandidateOrigin origin = CandidateOrigin::LiteratureReviewer;
    bool kept = true;
    std::optional<std::string> drop_reason;

    bool operator==(const ConjectureCandidate&) const = default;
};

struct SettledConjecture {
    ConjectureCandidate candidate;
    engine::RunTrace trace;
    Resolution resolution = Resolution::Unsettled;
    /// The candidate itself, or its negation when refuted.
    TheoremStatement final_statement;
    std::string refiner_output;
    std::optional<std::string> note;

    bool operator==(const SettledConjecture&) const = default;
};

/// Raised when an agent's output does not follow its format contract.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One enumerated item of a seeder/reviewer/predictor answer.
struct ParsedItem {
    std::string title;
    std::vector<std::string> premises;
    std::string conclusion;
};

/// Items listed after the line `<section>:`. Each item starts with "1." or
/// "1)"; PREMISE: and CONCLUSION: lines fill the fields. An item without a
/// CONCLUSION line uses its whole text as the conclusion. Returns an empty
/// list when the section is missing.
[[nodiscard]] std::vector<ParsedItem> parse_items(std::string_view output,
                                                  std::string_view section);

/// Inverse of parse_items for prompt bindings.
[[nodiscard]] std::string format_items(const std::vector<ConjectureCandidate>& candidates);

/// Why a pipeline stage produced no result.
struct StageFailure {
    std::string stage;
    std::string message;
    std::optional<llm::BackendError> backend_error;
};

struct ResearchContext {
    std::shared_ptr<const agents::AgentRunner> runner;
    EventLog log;
};

struct SeedResult {
    std::string raw_output;
    std::string definitions;
    std::vector<TheoremStatement> statements;
};

[[nodiscard]] Result<SeedResult, StageFailure> generate_seeds(const ResearchGoal& goal,
                                                             llm::Backend& backend,
                                                             llm::Session& session,
                                                             const ResearchContext& ctx = {});

struct CandidateList {
    std::string raw_output;
    std::vector<ConjectureCandidate> candidates;
    /// Items dropped as duplicates of an earlier statement.
    int duplicates = 0;
};

[[nodiscard]] Result<CandidateList, StageFailure>
review_literature(const ResearchGoal& goal, const SeedResult& seeds, llm::Backend& backend,
                  llm::Session& session, const ResearchContext& ctx = {});

/// Optional stage: new conjectures proposed from the reviewed ones.
[[nodiscard]] Result<CandidateList, StageFailure>
predict_conjectures(const ResearchGoal& goal, const std::vector<ConjectureCandidate>& reviewed,
                    llm::Backend& backend, llm::Session& session,
                    const ResearchContext& ctx = {});

struct PreparedContext {
    std::string raw_output;
    std::vector<ConjectureCandidate> candidates;
    std::string notation_preamble;
};

/// Marks each candidate kept or dropped (with a reason). Candidates without
/// a decision are dropped.
[[nodiscard]] Result<PreparedContext, StageFailure>
prepare_context(const ResearchGoal& goal, const std::vector<ConjectureCandidate>& candidates,
                llm::Backend& backend, llm::Session& session, const ResearchContext& ctx = {});

/// The statement with the conclusion negated, premises unchanged.
[[nodiscard]] TheoremStatement negate(const TheoremStatement& statement);

/// Classifies a settled run as PROVED or REFUTED with one REFINER call.
/// EXHAUSTED and ABORTED runs are UNSETTLED without a call; an unparseable
/// answer or a backend error also gives UNSETTLED, with a note.
[[nodiscard]] SettledConjecture refine(const ConjectureCandidate& candidate,
                                       const engine::RunTrace& trace, llm::Backend& backend,
                                       llm::Session& session, const ResearchContext& ctx = {},
                                       std::string_view notation_preamble = {});

struct StageRecord {
    std::string stage;
    std::string raw_output;
    nlohmann::json parsed;
    std::optional<std::string> error;
    std::vector<std::string> warnings;
};

struct ResearchOptions {
    ResearchContext context;
    bool use_predictor = false;
    int parallelism = 1;
    /// Called as each stage finishes, before the next starts.
    std::function<void(const StageRecord&)> on_stage;
    /// Forwarded to the batch driver for every candidate run.
    std::function<void(std::size_t, const TheoremStatement&, const engine::RunTrace&,
                       llm::Session&)>
        on_run_done;
};

struct ResearchReport {
    ResearchGoal goal;
    std::vector<StageRecord> stages;
    std::vector<ConjectureCandidate> candidates;
    std::string notation_preamble;
    std::vector<SettledConjecture> settled;
    std::vector<std::string> warnings;
    /// A stage failed because the backend did.
    bool backend_failure = false;
};

/// seeds -> literature review -> (predictor) -> context preparation -> one
/// TTVR run per kept candidate -> refiner. Stage failures are recorded in
/// the report; later stages run on whatever survived.
[[nodiscard]] ResearchReport run_research(const ResearchGoal& goal, const RunConfig& config,
                                          llm::Backend& backend,
                                          const ResearchOptions& options = {});

void to_json(nlohmann::json& j, const ResearchGoal& v);
void from_json(const nlohmann::json& j, ResearchGoal& v);
void to_json(nlohmann::json& j, const ConjectureCandidate& v);
void from_json(const nlohmann::json& j, ConjectureCandidate& v);
void to_json(nlohmann::json& j, const SettledConjecture& v);
void from_json(const nlohmann::json& j, SettledConjecture& v);
void to_json(nlohmann::json& j, const StageRecord& v);
void from_json(const nlohmann::json& j, StageRecord& v);

} // namespace ttvr::research

namespace ttvr {
template <> struct RecordType<research::ConjectureCandidate> { static constexpr std::string_view name = "conjecture_candidate"; };
template <> struct RecordType<research::SettledConjecture> { static constexpr std::string_view name = "settled_conjecture"; };
template <> struct RecordType<research::StageRecord> { static constexpr std::string_view name = "research_stage"; };
} // namespace ttvr
