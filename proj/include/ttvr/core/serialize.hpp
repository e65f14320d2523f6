#pragma once

#include "ttvr/core/model.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ttvr {

/// Every serialized record carries this version; readers reject others.
inline constexpr int kSchemaVersion = 1;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void to_json(nlohmann::json& j, const TheoremStatement& v);
void from_json(const nlohmann::json& j, TheoremStatement& v);
void to_json(nlohmann::json& j, const ProofAttempt& v);
void from_json(const nlohmann::json& j, ProofAttempt& v);
void to_json(nlohmann::json& j, const ProofPosition& v);
void from_json(const nlohmann::json& j, ProofPosition& v);
void to_json(nlohmann::json& j, const VerifierVerdict& v);
void from_json(const nlohmann::json& j, VerifierVerdict& v);
void to_json(nlohmann::json& j, const FormalArtifact& v);
void from_json(const nlohmann::json& j, FormalArtifact& v);
void to_json(nlohmann::json& j, const ConformanceDecision& v);
void from_json(const nlohmann::json& j, ConformanceDecision& v);
void to_json(nlohmann::json& j, const RunConfig& v);
void from_json(const nlohmann::json& j, RunConfig& v);

/// Record type tag written into each line. Specialised per serializable type.
template <typename T>
struct RecordType;

template <> struct RecordType<TheoremStatement> { static constexpr std::string_view name = "theorem_statement"; };
template <> struct RecordType<ProofAttempt> { static constexpr std::string_view name = "proof_attempt"; };
template <> struct RecordType<VerifierVerdict> { static constexpr std::string_view name = "verifier_verdict"; };
template <> struct RecordType<FormalArtifact> { static constexpr std::string_view name = "formal_artifact"; };
template <> struct RecordType<ConformanceDecision> { static constexpr std::string_view name = "conformance_decision"; };
template <> struct RecordType<RunConfig> { static constexpr std::string_view name = "run_config"; };

/// Wraps a payload object with schema_version and type.
[[nodiscard]] nlohmann::json envelope(std::string_view type, nlohmann::json payload);

/// Checks schema_version and type; throws FormatError on mismatch.
void check_envelope(const nlohmann::json& j, std::string_view type);

/// Compact one-line JSON; invalid UTF-8 in strings is replaced, not fatal.
[[nodiscard]] std::string dump_line(const nlohmann::json& j);

[[nodiscard]] nlohmann::json parse_json_line(std::string_view line);

/// One-line canonical form of a record (no embedded newlines).
template <typename T>
[[nodiscard]] std::string to_line(const T& value) {
    return dump_line(envelope(RecordType<T>::name, nlohmann::json(value)));
}

template <typename T>
[[nodiscard]] T from_line(std::string_view line) {
    nlohmann::json j = parse_json_line(line);
    check_envelope(j, RecordType<T>::name);
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string(RecordType<T>::name) + ": " + e.what());
    }
}

namespace json_util {

template <typename T>
void put_optional(nlohmann::json& j, const char* key, const std::optional<T>& value) {
    if (value) {
        j[key] = *value;
    } else {
        j[key] = nullptr;
    }
}

template <typename T>
std::optional<T> get_optional(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return std::nullopt;
    }
    return it->template get<T>();
}

} // namespace json_util

} // namespace ttvr
