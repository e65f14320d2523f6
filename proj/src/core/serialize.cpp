#include "ttvr/core/serialize.hpp"

namespace ttvr {

using nlohmann::json;
using json_util::get_optional;
using json_util::put_optional;

void to_json(json& j, const TheoremStatement& v) {
    j = json{{"id", v.id},
             {"premises", v.premises},
             {"conclusion", v.conclusion},
             {"source", to_string(v.source)}};
    put_optional(j, "goal_tag", v.goal_tag);
}

void from_json(const json& j, TheoremStatement& v) {
    v.id = j.at("id").get<std::string>();
    v.premises = j.at("premises").get<std::vector<std::string>>();
    v.conclusion = j.at("conclusion").get<std::string>();
    v.source = j.contains("source") ? parse_statement_source(j.at("source").get<std::string>())
                                    : StatementSource::UserSupplied;
    v.goal_tag = get_optional<std::string>(j, "goal_tag");
}

void to_json(json& j, const ProofAttempt& v) {
    j = json{{"iteration", v.iteration}, {"body", v.body}, {"produced_by", v.produced_by}};
}

void from_json(const json& j, ProofAttempt& v) {
    v.iteration = j.at("iteration").get<int>();
    v.body = j.at("body").get<std::string>();
    v.produced_by = j.value("produced_by", std::string{});
}

void to_json(json& j, const ProofPosition& v) {
    j = json{{"step_label", v.step_label}, {"quote", v.quote}};
}

void from_json(const json& j, ProofPosition& v) {
    v.step_label = j.at("step_label").get<std::string>();
    v.quote = j.at("quote").get<std::string>();
}

void to_json(json& j, const VerifierVerdict& v) {
    j = json{{"decision", to_string(v.decision)}, {"verifier_index", v.verifier_index}};
    put_optional(j, "evidence", v.evidence);
    put_optional(j, "position", v.position);
}

void from_json(const json& j, VerifierVerdict& v) {
    v.decision = parse_decision(j.at("decision").get<std::string>());
    v.verifier_index = j.at("verifier_index").get<int>();
    v.evidence = get_optional<std::string>(j, "evidence");
    v.position = get_optional<ProofPosition>(j, "position");
}

void to_json(json& j, const FormalArtifact& v) {
    j = json{{"source_text", v.source_text},
             {"checker_outcome", to_string(v.checker_outcome)},
             {"checker_log", v.checker_log},
             {"axiomatized_steps", v.axiomatized_steps}};
}

void from_json(const json& j, FormalArtifact& v) {
    v.source_text = j.at("source_text").get<std::string>();
    v.checker_outcome = parse_checker_outcome(j.at("checker_outcome").get<std::string>());
    v.checker_log = j.at("checker_log").get<std::string>();
    v.axiomatized_steps = j.at("axiomatized_steps").get<int>();
}

void to_json(json& j, const ConformanceDecision& v) {
    j = json{{"reviewer", v.reviewer},
             {"decision", to_string(v.decision)},
             {"notes", v.notes},
             {"timestamp", v.timestamp}};
}

void from_json(const json& j, ConformanceDecision& v) {
    v.reviewer = j.at("reviewer").get<std::string>();
    v.decision = parse_review_decision(j.at("decision").get<std::string>());
    v.notes = j.at("notes").get<std::string>();
    v.timestamp = j.at("timestamp").get<std::string>();
}

void to_json(json& j, const RunConfig& v) {
    j = json{{"max_iterations", v.max_iterations},
             {"gateway_error_budget", v.gateway_error_budget},
             {"verifier_count", v.verifier_count},
             {"axiomatize_searchable_steps", v.axiomatize_searchable_steps},
             {"backend_profile", v.backend_profile},
             {"context_preparer_in_default_mode", v.context_preparer_in_default_mode}};
}

void from_json(const json& j, RunConfig& v) {
    const RunConfig defaults;
    v.max_iterations = j.value("max_iterations", defaults.max_iterations);
    v.gateway_error_budget = j.value("gateway_error_budget", defaults.gateway_error_budget);
    v.verifier_count = j.value("verifier_count", defaults.verifier_count);
    v.axiomatize_searchable_steps =
        j.value("axiomatize_searchable_steps", defaults.axiomatize_searchable_steps);
    v.backend_profile = j.value("backend_profile", defaults.backend_profile);
    v.context_preparer_in_default_mode =
        j.value("context_preparer_in_default_mode", defaults.context_preparer_in_default_mode);
}

json envelope(std::string_view type, json payload) {
    if (!payload.is_object()) {
        throw FormatError("record payload must be an object");
    }
    payload["schema_version"] = kSchemaVersion;
    payload["type"] = std::string(type);
    return payload;
}

void check_envelope(const json& j, std::string_view type) {
    if (!j.is_object()) {
        throw FormatError("record is not an object");
    }
    auto version = j.find("schema_version");
    if (version == j.end() || !version->is_number_integer() ||
        version->get<int>() != kSchemaVersion) {
        throw FormatError("unsupported or missing schema_version");
    }
    auto t = j.find("type");
    if (t == j.end() || !t->is_string() || t->get<std::string>() != type) {
        throw FormatError("expected record type '" + std::string(type) + "'");
    }
}

std::string dump_line(const json& j) {
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

json parse_json_line(std::string_view line) {
    try {
        return json::parse(line);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed record line: ") + e.what());
    }
}

} // namespace ttvr
