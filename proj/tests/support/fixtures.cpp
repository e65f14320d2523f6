#include "fixtures.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace ttvr::fixtures {

namespace fs = std::filesystem;
using llm::ScriptEntry;
namespace match = llm::match;

TheoremStatement statement(std::string id, std::vector<std::string> premises,
                           std::string conclusion) {
    TheoremStatement s;
    s.id = std::move(id);
    s.premises = std::move(premises);
    s.conclusion = std::move(conclusion);
    return s;
}

std::string reject_reply(std::string_view quote, std::string_view label,
                         std::string_view evidence) {
    return "VERDICT: REJECT\nPOSITION: " + std::string(label) + " | \"" + std::string(quote) +
           "\"\nEVIDENCE: " + std::string(evidence) + "\n";
}

std::shared_ptr<llm::ScriptedBackend> loop_backend(int accept_at) {
    std::vector<ScriptEntry> script;
    script.push_back({match::tag_contains("prover"), std::string(kProof)});
    if (accept_at > 0) {
        const std::string at = "/it=" + std::to_string(accept_at) + "/";
        script.push_back({match::all_of({match::tag_contains("verifier"), match::tag_contains(at)}),
                          std::string("VERDICT: ACCEPT\n")});
    }
    script.push_back({match::tag_contains("verifier"), reject_reply()});
    script.push_back({match::tag_contains("formalizer"), std::string("theorem t : True := trivial")});
    return std::make_shared<llm::ScriptedBackend>(std::move(script));
}

std::string candidate_marker(int k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "[c%02d]", k);
    return buf;
}

std::shared_ptr<llm::ScriptedBackend> research_backend(const ResearchShape& shape) {
    std::vector<ScriptEntry> script;

    script.push_back({match::tag_contains("seeder"),
                      std::string("DEFINITIONS:\nA graph G = (V, E) is finite and simple.\n"
                                  "STATEMENTS:\n"
                                  "1. Seed one\nPREMISE: G is a connected graph\n"
                                  "CONCLUSION: G has a spanning tree\n"
                                  "2. Seed two\nCONCLUSION: every tree with n vertices has n - 1 edges\n")});

    std::string reviewed = "Sources consulted: survey articles.\n\nCONJECTURES:\n";
    for (int k = 1; k <= shape.reviewed; ++k) {
        reviewed += std::to_string(k) + ". Conjecture " + std::to_string(k) + "\n";
        reviewed += "PREMISE: G is a connected graph on n vertices\n";
        reviewed += "CONCLUSION: " + candidate_marker(k) +
                    " the invariant of G is at most n/" + std::to_string(k + 1) + "\n";
    }
    script.push_back({match::tag_contains("literature_reviewer"), reviewed});

    std::string prepared = "NOTATION:\nn = |V(G)|, m = |E(G)|.\nDECISIONS:\n";
    for (int k = 1; k <= shape.reviewed; ++k) {
        prepared += std::to_string(k) + (k <= shape.kept ? ". KEEP\n" : ". DROP: already solved\n");
    }
    script.push_back({match::tag_contains("context_preparer"), prepared});

    for (int k = 1; k <= shape.kept; ++k) {
        const std::string marker = candidate_marker(k);
        const bool settled = k <= shape.refuted + shape.proved;
        const bool refuted = k <= shape.refuted;
        script.push_back({match::all_of({match::tag_contains("prover"),
                                         match::user_contains(marker)}),
                          "Step 1. Consider the graph H_" + std::to_string(k) +
                              " built from a path.\nStep 2. " +
                              (refuted ? "Its invariant exceeds the bound, so the claim fails."
                                       : "Its invariant is bounded, so the claim holds.")});
        if (!settled) {
            script.push_back({match::all_of({match::tag_contains("verifier"),
                                             match::user_contains(marker)}),
                              reject_reply("built from a path", "Step 1",
                                           "The construction is not defined for odd n.")});
        }
        if (refuted) {
            script.push_back(
                {match::all_of({match::tag_contains("refiner"), match::user_contains(marker)}),
                 "RESOLUTION: REFUTED\nINVERTED:\nPREMISE: n >= 4\nCONCLUSION: " + marker +
                     " there is a connected graph on n vertices whose invariant exceeds n/" +
                     std::to_string(k + 1) + "\n"});
        } else if (settled) {
            script.push_back(
                {match::all_of({match::tag_contains("refiner"), match::user_contains(marker)}),
                 std::string("RESOLUTION: PROVED\n")});
        }
    }
    script.push_back({match::tag_contains("verifier"), std::string("VERDICT: ACCEPT\n")});
    return std::make_shared<llm::ScriptedBackend>(std::move(script), "scripted:research");
}

TempDir::TempDir() {
    std::string pattern = (fs::temp_directory_path() / "ttvr-test-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) {
        throw std::runtime_error("mkdtemp failed");
    }
    path_ = pattern;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

fs::path write_script(const fs::path& path, const std::string& body) {
    std::ofstream(path) << "#!/bin/sh\n" << body << "\n";
    fs::permissions(path, fs::perms::owner_all | fs::perms::group_read | fs::perms::others_read);
    return path;
}

} // namespace ttvr::fixtures
