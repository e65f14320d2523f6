#pragma once

#include "ttvr/engine/ttvr.hpp"

#include <filesystem>
#include <functional>
#include <vector>

namespace ttvr::engine {

struct BatchOptions {
    /// Maximum number of runs in flight. 1 runs the statements one after the
    /// other on the calling thread.
    int parallelism = 1;
    /// Called once per finished run (from a worker thread, serialized).
    std::function<void(std::size_t index, const TheoremStatement&, const RunTrace&,
                       llm::Session&)>
        on_run_done;
};

/// Runs TTVR independently on each statement; results are in input order.
/// Each run gets its own session. Exceptions from any run are rethrown after
/// all workers have stopped.
[[nodiscard]] std::vector<RunTrace> run_batch(const std::vector<TheoremStatement>& statements,
                                              const RunConfig& config, llm::Backend& backend,
                                              const EngineOptions& engine_options = {},
                                              const BatchOptions& batch_options = {});

/// Reads a file of theorem_statement records, one per line. Blank lines and
/// lines starting with '#' are skipped. Throws FormatError/ValidationError
/// naming the offending line; duplicate ids are rejected.
[[nodiscard]] std::vector<TheoremStatement> load_statements(const std::filesystem::path& path);

} // namespace ttvr::engine
