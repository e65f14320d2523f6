#include "ttvr/engine/trace_io.hpp"

namespace ttvr::llm {

void to_json(nlohmann::json& j, const BackendError& v) {
    j = {{"kind", to_string(v.kind)}, {"detail", v.detail}, {"retryable", v.retryable}};
}

void from_json(const nlohmann::json& j, BackendError& v) {
    v.kind = parse_error_kind(j.at("kind").get<std::string>());
    v.detail = j.at("detail").get<std::string>();
    v.retryable = j.at("retryable").get<bool>();
}

} // namespace ttvr::llm

namespace ttvr::engine {

using json_util::get_optional;
using json_util::put_optional;

void to_json(nlohmann::json& j, const IterationRecord& v) {
    j = {{"index", v.index},
         {"attempt", v.attempt},
         {"verdicts", v.verdicts},
         {"outcome", to_string(v.outcome)},
         {"malformed_verdicts", v.malformed_verdicts}};
}

void from_json(const nlohmann::json& j, IterationRecord& v) {
    v.index = j.at("index").get<int>();
    v.attempt = j.at("attempt").get<ProofAttempt>();
    v.verdicts = j.at("verdicts").get<std::vector<VerifierVerdict>>();
    v.outcome = parse_iteration_outcome(j.at("outcome").get<std::string>());
    v.malformed_verdicts = j.value("malformed_verdicts", 0);
}

void to_json(nlohmann::json& j, const RunTrace& v) {
    j = {{"statement_fingerprint", v.statement_fingerprint},
         {"statement_id", v.statement_id},
         {"config", v.config},
         {"iterations", v.iterations},
         {"terminal", to_string(v.terminal)},
         {"gateway_errors", v.gateway_errors},
         {"difficulty_index", v.difficulty_index}};
    put_optional(j, "abort_error", v.abort_error);
}

void from_json(const nlohmann::json& j, RunTrace& v) {
    v.statement_fingerprint = j.at("statement_fingerprint").get<std::string>();
    v.statement_id = j.at("statement_id").get<std::string>();
    v.config = j.at("config").get<RunConfig>();
    v.iterations = j.at("iterations").get<std::vector<IterationRecord>>();
    v.terminal = parse_proof_status(j.at("terminal").get<std::string>());
    v.gateway_errors = j.at("gateway_errors").get<int>();
    v.difficulty_index = j.at("difficulty_index").get<int>();
    v.abort_error = get_optional<llm::BackendError>(j, "abort_error");
}

} // namespace ttvr::engine
