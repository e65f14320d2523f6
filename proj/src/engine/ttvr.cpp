#include "ttvr/engine/ttvr.hpp"

#include "ttvr/agents/statement_text.hpp"
#include "ttvr/agents/verdict.hpp"
#include "ttvr/core/text.hpp"

#include <algorithm>
#include <array>

namespace ttvr::engine {

using agents::AgentRole;

namespace {

constexpr std::string_view kConjectureNote =
    "The statement is a conjecture and may be false. If you find that it is false, prove its "
    "negation instead, and say so in the first line of your answer.";

constexpr std::string_view kEmptyProofBody = "(the prover returned no text)";

/// Outcome of one agent call under the run's error budget.
struct CallOutcome {
    std::optional<agents::AgentOutput> output;
    std::optional<llm::BackendError> abort_error;
};

class LoopRunner {
public:
    LoopRunner(const TheoremStatement& statement, const RunConfig& config, llm::Backend& backend,
               llm::Session& session, const EngineOptions& options)
        : statement_(statement),
          config_(config),
          backend_(backend),
          session_(session),
          options_(options),
          runner_(options.runner ? options.runner
                                 : std::make_shared<const agents::AgentRunner>()) {}

    RunTrace run() {
        validate(statement_);
        validate(config_);

        trace_.statement_fingerprint = statement_fingerprint(statement_);
        trace_.statement_id = statement_.id;
        trace_.config = config_;
        run_tag_ = trace_.statement_fingerprint.substr(0, 8);
        statement_text_ = agents::format_statement(statement_, options_.notation_preamble);

        options_.log.emit("run_start", {{"run", run_tag_}, {"statement", statement_.id}});
        trace_.terminal = loop();
        trace_.gateway_errors = session_.gateway_error_count();
        trace_.difficulty_index = static_cast<int>(trace_.iterations.size());
        options_.log.emit("run_end", {{"run", run_tag_},
                                      {"terminal", to_string(trace_.terminal)},
                                      {"difficulty_index", trace_.difficulty_index},
                                      {"gateway_errors", trace_.gateway_errors}});
        return std::move(trace_);
    }

private:
    ProofStatus loop() {
        for (int i = 1; i <= config_.max_iterations; ++i) {
            options_.log.emit("iteration_start", {{"run", run_tag_}, {"iteration", i}});

            auto attempt = prove(i);
            if (!attempt) {
                return ProofStatus::Aborted;
            }

            IterationRecord record;
            record.index = i;
            record.attempt = std::move(*attempt);

            bool aborted = false;
            for (int v = 1; v <= config_.verifier_count; ++v) {
                auto verdict = verify(v, record);
                if (!verdict) {
                    aborted = true;
                    break;
                }
                options_.log.emit("verdict", {{"run", run_tag_},
                                              {"iteration", i},
                                              {"verifier", v},
                                              {"decision", to_string(verdict->decision)}});
                record.verdicts.push_back(std::move(*verdict));
                if (!record.verdicts.back().accepted()) {
                    break;
                }
            }

            if (aborted) {
                record.outcome = IterationOutcome::Errored;
                trace_.iterations.push_back(std::move(record));
                return ProofStatus::Aborted;
            }

            const bool all_accept =
                static_cast<int>(record.verdicts.size()) == config_.verifier_count &&
                std::all_of(record.verdicts.begin(), record.verdicts.end(),
                            [](const VerifierVerdict& v) { return v.accepted(); });
            record.outcome = all_accept ? IterationOutcome::Accepted : IterationOutcome::Rejected;
            trace_.iterations.push_back(std::move(record));
            if (all_accept) {
                return ProofStatus::ProvedUncertified;
            }
        }
        return ProofStatus::Exhausted;
    }

    std::string tag(int iteration, std::string_view extra = {}) const {
        std::string t = "it=" + std::to_string(iteration) + "/run=" + run_tag_;
        if (!extra.empty()) {
            t += '/';
            t += extra;
        }
        return t;
    }

    CallOutcome call(AgentRole role, const agents::Bindings& bindings, int iteration) {
        auto result = agents::run_within_budget(
            *runner_, role, bindings, backend_, session_, tag(iteration),
            [&](const llm::BackendError& error) {
                options_.log.emit("backend_error", {{"run", run_tag_},
                                                    {"iteration", iteration},
                                                    {"role", agents::to_string(role)},
                                                    {"kind", llm::to_string(error.kind)},
                                                    {"detail", error.detail},
                                                    {"gateway_errors",
                                                     session_.gateway_error_count()}});
            });
        if (result) {
            return {std::move(*result), std::nullopt};
        }
        trace_.abort_error = result.error();
        return {std::nullopt, result.error()};
    }

    agents::Bindings prover_bindings() const {
        agents::Bindings b{{"statement", statement_text_}};
        if (statement_.source == StatementSource::ResearchMode) {
            b.emplace("conjecture_note", std::string(kConjectureNote));
        }
        return b;
    }

    std::optional<ProofAttempt> prove(int iteration) {
        AgentRole role = AgentRole::ProverFirst;
        agents::Bindings bindings;
        if (const IterationRecord* previous = last_rejected()) {
            role = AgentRole::ProverRevise;
            bindings = revise_bindings(*previous, statement_, options_.notation_preamble);
            if (statement_.source == StatementSource::ResearchMode) {
                bindings.emplace("conjecture_note", std::string(kConjectureNote));
            }
        } else {
            bindings = prover_bindings();
        }

        // An empty proof is re-requested once from a fresh prover.
        for (int attempt = 0; attempt < 2; ++attempt) {
            auto outcome = call(role, bindings, iteration);
            if (!outcome.output) {
                return std::nullopt;
            }
            if (!text::trim(outcome.output->text).empty()) {
                return ProofAttempt{iteration, std::move(outcome.output->text),
                                    std::move(outcome.output->call_tag)};
            }
            options_.log.warn("prover returned empty text",
                              {{"run", run_tag_}, {"iteration", iteration}});
        }
        return ProofAttempt{iteration, std::string(kEmptyProofBody),
                            std::string(agents::to_string(role)) + "/" + tag(iteration)};
    }

    /// Returns nullopt when the run must abort.
    std::optional<VerifierVerdict> verify(int verifier_index, IterationRecord& record) {
        const AgentRole role = verifier_index == 1 ? AgentRole::VerifierA : AgentRole::VerifierB;
        const agents::Bindings bindings{{"statement", statement_text_},
                                        {"proof", record.attempt.body}};

        // A malformed verdict is re-queried once from a fresh verifier.
        for (int attempt = 0; attempt < 2; ++attempt) {
            auto outcome = call(role, bindings, record.index);
            if (!outcome.output) {
                return std::nullopt;
            }
            auto parsed = agents::parse_verdict(outcome.output->text, record.attempt, verifier_index);
            if (parsed) {
                return std::move(*parsed);
            }
            ++record.malformed_verdicts;
            options_.log.warn("malformed verdict", {{"run", run_tag_},
                                                    {"iteration", record.index},
                                                    {"verifier", verifier_index},
                                                    {"reason", parsed.error().reason}});
        }
        return agents::unparseable_verdict(record.attempt, verifier_index);
    }

    const IterationRecord* last_rejected() const {
        if (trace_.iterations.empty() ||
            trace_.iterations.back().outcome != IterationOutcome::Rejected) {
            return nullptr;
        }
        return &trace_.iterations.back();
    }

    const TheoremStatement& statement_;
    const RunConfig& config_;
    llm::Backend& backend_;
    llm::Session& session_;
    const EngineOptions& options_;
    std::shared_ptr<const agents::AgentRunner> runner_;

    RunTrace trace_;
    std::string run_tag_;
    std::string statement_text_;
};

} // namespace

std::string_view to_string(IterationOutcome value) noexcept {
    switch (value) {
    case IterationOutcome::Accepted: return "ACCEPTED";
    case IterationOutcome::Rejected: return "REJECTED";
    case IterationOutcome::Errored: return "ERRORED";
    }
    return "?";
}

IterationOutcome parse_iteration_outcome(std::string_view name) {
    for (auto v : std::array{IterationOutcome::Accepted, IterationOutcome::Rejected,
                             IterationOutcome::Errored}) {
        if (to_string(v) == name) {
            return v;
        }
    }
    throw std::invalid_argument("unknown iteration outcome '" + std::string(name) + "'");
}

const ProofAttempt* RunTrace::accepted_proof() const {
    if (terminal != ProofStatus::ProvedUncertified && terminal != ProofStatus::Valid) {
        return nullptr;
    }
    if (iterations.empty() || iterations.back().outcome != IterationOutcome::Accepted) {
        return nullptr;
    }
    return &iterations.back().attempt;
}

RunTrace run_ttvr(const TheoremStatement& statement, const RunConfig& config,
                  llm::Backend& backend, llm::Session& session, const EngineOptions& options) {
    return LoopRunner(statement, config, backend, session, options).run();
}

RunTrace run_ttvr(const TheoremStatement& statement, const RunConfig& config,
                  llm::Backend& backend, const EngineOptions& options) {
    validate(config);
    llm::Session session(config.gateway_error_budget);
    return run_ttvr(statement, config, backend, session, options);
}

agents::Bindings revise_bindings(const IterationRecord& previous,
                                 const TheoremStatement& statement,
                                 std::string_view notation_preamble) {
    if (previous.outcome != IterationOutcome::Rejected) {
        throw ContractViolation("revise_bindings requires a REJECTED iteration, got " +
                                std::string(to_string(previous.outcome)));
    }
    const VerifierVerdict* rejection = nullptr;
    for (const auto& v : previous.verdicts) {
        if (!v.accepted()) {
            rejection = &v;
            break;
        }
    }
    if (rejection == nullptr || !rejection->evidence || !rejection->position) {
        throw ContractViolation("rejected iteration carries no complete REJECT verdict");
    }
    return {{"statement", agents::format_statement(statement, notation_preamble)},
            {"prev_proof", previous.attempt.body},
            {"evidence", *rejection->evidence},
            {"position", agents::format_position(*rejection->position)}};
}

int difficulty_index(const RunTrace& trace) noexcept {
    return static_cast<int>(trace.iterations.size());
}

std::vector<std::string> check(const RunTrace& trace) {
    std::vector<std::string> problems;
    if (trace.difficulty_index != static_cast<int>(trace.iterations.size())) {
        problems.emplace_back("difficulty_index differs from the number of iterations");
    }
    if (trace.iterations.empty() && trace.terminal != ProofStatus::Aborted) {
        problems.emplace_back("only an ABORTED run may have no iterations");
    }
    for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
        const auto& it = trace.iterations[i];
        if (it.index != static_cast<int>(i) + 1) {
            problems.emplace_back("iteration indices must be 1..k without gaps");
        }
        bool all_accept = static_cast<int>(it.verdicts.size()) == trace.config.verifier_count;
        for (std::size_t v = 0; v < it.verdicts.size(); ++v) {
            if (it.verdicts[v].verifier_index != static_cast<int>(v) + 1) {
                problems.emplace_back("verdicts must be ordered by verifier index");
            }
            if (!it.verdicts[v].accepted()) {
                all_accept = false;
                if (v + 1 != it.verdicts.size()) {
                    problems.emplace_back("verifier B consulted after verifier A rejected");
                }
            }
        }
        if ((it.outcome == IterationOutcome::Accepted) != all_accept) {
            problems.emplace_back("ACCEPTED iff all required verdicts are ACCEPT");
        }
    }
    if (trace.terminal == ProofStatus::Exhausted) {
        if (trace.difficulty_index != trace.config.max_iterations) {
            problems.emplace_back("EXHAUSTED requires difficulty_index == N");
        }
        if (!trace.iterations.empty() &&
            trace.iterations.back().outcome == IterationOutcome::Accepted) {
            problems.emplace_back("EXHAUSTED run ended with an accepted iteration");
        }
    }
    if (trace.terminal == ProofStatus::ProvedUncertified && trace.accepted_proof() == nullptr) {
        problems.emplace_back("PROVED_UNCERTIFIED run must end with an accepted iteration");
    }
    return problems;
}

} // namespace ttvr::engine
