#pragma once

#include "ttvr/core/model.hpp"
#include "ttvr/llm/mock.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace ttvr::fixtures {

TheoremStatement statement(std::string id, std::vector<std::string> premises,
                           std::string conclusion);

/// Prover reply used by the loop scripts; contains kRejectQuote.
inline constexpr const char* kProof =
    "Step 1. Let x be arbitrary. The claim follows from the lemma applied to x.\n"
    "Step 2. Hence the conclusion holds for every x.";
inline constexpr const char* kRejectQuote = "follows from the lemma";

std::string reject_reply(std::string_view quote = kRejectQuote, std::string_view label = "Step 1",
                         std::string_view evidence = "The lemma does not apply to x.");

/// Verifiers accept at iteration `accept_at` (never when 0) and reject
/// earlier iterations.
std::shared_ptr<llm::ScriptedBackend> loop_backend(int accept_at);

/// Scripted research pipeline: `reviewed` candidates, of which the first
/// `kept` survive preparation; the first `refuted` kept ones are refuted,
/// the next `proved` proved, the rest never accepted.
struct ResearchShape {
    int reviewed = 14;
    int kept = 11;
    int refuted = 9;
    int proved = 0;
};

std::shared_ptr<llm::ScriptedBackend> research_backend(const ResearchShape& shape);

/// Marker embedded in candidate k's conclusion (1-based).
std::string candidate_marker(int k);

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const {
        return path_ / name;
    }

private:
    std::filesystem::path path_;
};

/// Writes an executable shell script.
std::filesystem::path write_script(const std::filesystem::path& path, const std::string& body);

} // namespace ttvr::fixtures
