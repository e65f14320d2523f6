#pragma once

#include "ttvr/archive/archive.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ttvr::archive {

/// Number of maximal runs of non-whitespace characters.
[[nodiscard]] std::size_t token_length(std::string_view text) noexcept;

enum class ItnMarker {
    NotApplicable, ///< "NA": not solved
    Unknown,       ///< "?": result lost or in doubt
    Pending,       ///< blank: run still in progress
};

using Itn = std::variant<int, ItnMarker>;

[[nodiscard]] std::string to_text(const Itn& itn);

/// One table column. Annotation cells: nullopt = not tracked, "" = pending
/// (rendered blank), otherwise the literal text (Y, N, ?, NA, O, C, P, R).
struct DifficultyRow {
    std::string item_label;
    Itn itn = ItnMarker::Pending;
    std::optional<std::string> open_or_closed;
    std::optional<std::string> proof_or_refutation;
    std::optional<std::string> correct_human;
    std::optional<std::string> certified;

    bool operator==(const DifficultyRow&) const = default;
};

[[nodiscard]] std::vector<std::string> check(const DifficultyRow& row);

enum class TableFormat { Csv, Display };

[[nodiscard]] TableFormat parse_table_format(std::string_view name);

/// Items run left to right; the attribute rows are |itn|, "O or C",
/// "P or R", "correct?" and "certified?". An attribute row is left out when
/// no item tracks it. Throws std::invalid_argument on an empty row list.
[[nodiscard]] std::string render_difficulty_table(const std::vector<DifficultyRow>& rows,
                                                  TableFormat format,
                                                  std::string_view header_label = "problem");

/// One row per statement (latest trace wins), annotated from research and
/// certification records in the same archive.
[[nodiscard]] std::vector<DifficultyRow> difficulty_rows(const ArchiveContents& contents);

struct ArchiveSummary {
    std::size_t records = 0;
    int corrupt_lines = 0;
    std::size_t traces = 0;
    std::map<std::string, int> by_terminal;
    std::map<std::string, int> by_resolution;
    std::map<std::string, int> by_certification;
    double mean_difficulty = 0.0;
    /// Traces ending in an accepted proof (of the statement or its negation).
    std::size_t solved = 0;
    double solved_fraction = 0.0;
    int axiomatized_cases = 0;
};

[[nodiscard]] ArchiveSummary summarize_archive(const ArchiveContents& contents);

[[nodiscard]] std::string format_summary(const ArchiveSummary& summary);

} // namespace ttvr::archive
