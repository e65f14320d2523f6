#pragma once

#include "ttvr/core/serialize.hpp"
#include "ttvr/engine/ttvr.hpp"

namespace ttvr::llm {
void to_json(nlohmann::json& j, const BackendError& v);
void from_json(const nlohmann::json& j, BackendError& v);
} // namespace ttvr::llm

namespace ttvr::engine {
void to_json(nlohmann::json& j, const IterationRecord& v);
void from_json(const nlohmann::json& j, IterationRecord& v);
void to_json(nlohmann::json& j, const RunTrace& v);
void from_json(const nlohmann::json& j, RunTrace& v);
} // namespace ttvr::engine

namespace ttvr {
template <> struct RecordType<engine::RunTrace> { static constexpr std::string_view name = "run_trace"; };
} // namespace ttvr
