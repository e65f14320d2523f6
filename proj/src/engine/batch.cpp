#include "ttvr/engine/batch.hpp"

#include "ttvr/core/serialize.hpp"
#include "ttvr/core/text.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

namespace ttvr::engine {

std::vector<RunTrace> run_batch(const std::vector<TheoremStatement>& statements,
                                const RunConfig& config, llm::Backend& backend,
                                const EngineOptions& engine_options,
                                const BatchOptions& batch_options) {
    validate(config);
    std::vector<RunTrace> traces(statements.size());
    std::mutex callback_mutex;

    auto run_one = [&](std::size_t i) {
        llm::Session session(config.gateway_error_budget);
        traces[i] = run_ttvr(statements[i], config, backend, session, engine_options);
        if (batch_options.on_run_done) {
            std::lock_guard lock(callback_mutex);
            batch_options.on_run_done(i, statements[i], traces[i], session);
        }
    };

    const auto workers = static_cast<std::size_t>(std::max(1, batch_options.parallelism));
    if (workers == 1 || statements.size() <= 1) {
        for (std::size_t i = 0; i < statements.size(); ++i) {
            run_one(i);
        }
        return traces;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(workers, statements.size()); ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= statements.size()) {
                        return;
                    }
                    try {
                        run_one(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next.store(statements.size());
                        return;
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return traces;
}

std::vector<TheoremStatement> load_statements(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open statements file " + path.string());
    }
    std::vector<TheoremStatement> out;
    std::set<std::string> ids;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') {
            continue;
        }
        const std::string where = path.string() + ":" + std::to_string(number) + ": ";
        TheoremStatement statement;
        try {
            statement = from_line<TheoremStatement>(trimmed);
            validate(statement);
        } catch (const FormatError& e) {
            throw FormatError(where + e.what());
        } catch (const ValidationError& e) {
            throw FormatError(where + e.what());
        }
        if (!ids.insert(statement.id).second) {
            throw FormatError(where + "duplicate statement id '" + statement.id + "'");
        }
        out.push_back(std::move(statement));
    }
    return out;
}

} // namespace ttvr::engine
