#include "ttvr/archive/report.hpp"

#include "ttvr/core/text.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

namespace ttvr::archive {

namespace {

using Grid = std::vector<std::vector<std::string>>;

std::string csv_cell(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) {
        return cell;
    }
    return "\"" + text::replace_all(cell, "\"", "\"\"") + "\"";
}

std::string render_csv(const Grid& grid) {
    std::string out;
    for (const auto& row : grid) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                out.push_back(',');
            }
            out += csv_cell(row[i]);
        }
        out.push_back('\n');
    }
    return out;
}

std::string render_display(const Grid& grid) {
    std::vector<std::size_t> width(grid.front().size(), 0);
    for (const auto& row : grid) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            width[i] = std::max(width[i], row[i].size());
        }
    }
    std::ostringstream os;
    for (std::size_t r = 0; r < grid.size(); ++r) {
        for (std::size_t i = 0; i < grid[r].size(); ++i) {
            if (i == 0) {
                os << std::left << std::setw(static_cast<int>(width[i])) << grid[r][i];
            } else {
                os << " | " << std::right << std::setw(static_cast<int>(width[i])) << grid[r][i];
            }
        }
        os << '\n';
        if (r == 0) {
            for (std::size_t i = 0; i < width.size(); ++i) {
                os << (i == 0 ? "" : "-+-") << std::string(width[i], '-');
            }
            os << '\n';
        }
    }
    return os.str();
}

bool solved(ProofStatus terminal) {
    return terminal == ProofStatus::ProvedUncertified || terminal == ProofStatus::Valid;
}

} // namespace

std::size_t token_length(std::string_view text) noexcept { return text::count_tokens(text); }

std::string to_text(const Itn& itn) {
    if (const int* n = std::get_if<int>(&itn)) {
        return std::to_string(*n);
    }
    switch (std::get<ItnMarker>(itn)) {
    case ItnMarker::NotApplicable: return "NA";
    case ItnMarker::Unknown: return "?";
    case ItnMarker::Pending: return "";
    }
    return "";
}

std::vector<std::string> check(const DifficultyRow& row) {
    std::vector<std::string> problems;
    auto allowed = [&](const std::optional<std::string>& cell, std::set<std::string> values,
                       const char* name) {
        values.insert({"", "?", "NA"});
        if (cell && values.count(*cell) == 0) {
            problems.push_back(std::string(name) + " has unexpected value '" + *cell + "'");
        }
    };
    if (row.item_label.empty()) {
        problems.emplace_back("item label must be non-empty");
    }
    if (const int* n = std::get_if<int>(&row.itn); n != nullptr && *n < 1) {
        problems.emplace_back("itn must be >= 1");
    }
    allowed(row.open_or_closed, {"O", "C"}, "O or C");
    allowed(row.proof_or_refutation, {"P", "R"}, "P or R");
    allowed(row.correct_human, {"Y", "N"}, "correct?");
    allowed(row.certified, {"Y", "N"}, "certified?");
    return problems;
}

TableFormat parse_table_format(std::string_view name) {
    if (name == "csv") {
        return TableFormat::Csv;
    }
    if (name == "table") {
        return TableFormat::Display;
    }
    throw std::invalid_argument("unknown table format '" + std::string(name) +
                                "' (expected csv or table)");
}

std::string render_difficulty_table(const std::vector<DifficultyRow>& rows, TableFormat format,
                                    std::string_view header_label) {
    if (rows.empty()) {
        throw std::invalid_argument("difficulty table needs at least one row");
    }
    Grid grid;
    grid.push_back({std::string(header_label)});
    grid.push_back({"|itn|"});
    for (const auto& r : rows) {
        grid[0].push_back(r.item_label);
        grid[1].push_back(to_text(r.itn));
    }

    using Field = std::optional<std::string> DifficultyRow::*;
    const std::pair<const char*, Field> attributes[] = {
        {"O or C", &DifficultyRow::open_or_closed},
        {"P or R", &DifficultyRow::proof_or_refutation},
        {"correct?", &DifficultyRow::correct_human},
        {"certified?", &DifficultyRow::certified},
    };
    for (const auto& [label, field] : attributes) {
        const bool tracked =
            std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return (r.*field).has_value(); });
        if (!tracked) {
            continue;
        }
        std::vector<std::string> line{label};
        for (const auto& r : rows) {
            line.push_back((r.*field).value_or(""));
        }
        grid.push_back(std::move(line));
    }
    return format == TableFormat::Csv ? render_csv(grid) : render_display(grid);
}

std::vector<DifficultyRow> difficulty_rows(const ArchiveContents& contents) {
    std::vector<std::string> order;
    std::map<std::string, TraceEntry> traces;
    std::map<std::string, research::Resolution> resolutions;
    // A refutation is certified against the negated statement.
    std::map<std::string, std::string> negation_of;
    for (const auto& r : contents.records) {
        try {
            if (r.kind == RecordKind::Trace) {
                auto entry = trace_from_payload(r.payload);
                const std::string id = entry.statement.id;
                if (traces.count(id) == 0) {
                    order.push_back(id);
                }
                traces.insert_or_assign(id, std::move(entry));
            } else if (r.kind == RecordKind::ResearchStage && r.payload.contains("settled")) {
                const auto s = r.payload.at("settled").get<research::SettledConjecture>();
                const auto fp = statement_fingerprint(s.candidate.statement);
                resolutions[fp] = s.resolution;
                negation_of[statement_fingerprint(s.final_statement)] = fp;
            }
        } catch (const std::exception&) {
            // Unreadable payloads are reported by summarize_archive.
        }
    }
    std::map<std::string, certification::CertificationCase> cases;
    for (auto& c : latest_cases(contents)) {
        auto fp = statement_fingerprint(c.statement);
        if (const auto it = negation_of.find(fp); it != negation_of.end()) {
            fp = it->second;
        }
        cases.insert_or_assign(fp, std::move(c));
    }

    std::vector<DifficultyRow> rows;
    for (const auto& id : order) {
        const auto& entry = traces.at(id);
        const auto& trace = entry.trace;
        const bool ok = solved(trace.terminal);
        DifficultyRow row;
        row.item_label = id;
        if (ok) {
            row.itn = trace.difficulty_index;
        } else if (trace.terminal == ProofStatus::Exhausted) {
            row.itn = ItnMarker::NotApplicable;
        } else {
            row.itn = ItnMarker::Unknown;
        }

        const std::string fp = trace.statement_fingerprint;
        if (const auto it = resolutions.find(fp); it != resolutions.end()) {
            switch (it->second) {
            case research::Resolution::Proved: row.proof_or_refutation = "P"; break;
            case research::Resolution::Refuted: row.proof_or_refutation = "R"; break;
            case research::Resolution::Unsettled: row.proof_or_refutation = "NA"; break;
            }
        }

        const std::string blank_or_na = ok ? "" : "NA";
        row.correct_human = blank_or_na;
        row.certified = blank_or_na;
        if (const auto it = cases.find(fp); it != cases.end()) {
            if (it->second.correct_annotation) {
                row.correct_human = *it->second.correct_annotation;
            }
            if (it->second.final_status == ProofStatus::Valid) {
                row.certified = "Y";
            } else if (it->second.final_status == ProofStatus::Rejected) {
                row.certified = "N";
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ArchiveSummary summarize_archive(const ArchiveContents& contents) {
    ArchiveSummary s;
    s.records = contents.records.size();
    s.corrupt_lines = contents.corrupt_lines;
    long long difficulty_total = 0;
    for (const auto& r : contents.records) {
        try {
            if (r.kind == RecordKind::Trace) {
                const auto entry = trace_from_payload(r.payload);
                ++s.traces;
                ++s.by_terminal[std::string(to_string(entry.trace.terminal))];
                difficulty_total += entry.trace.difficulty_index;
                if (solved(entry.trace.terminal)) {
                    ++s.solved;
                }
            } else if (r.kind == RecordKind::ResearchStage && r.payload.contains("settled")) {
                const auto settled = r.payload.at("settled").get<research::SettledConjecture>();
                ++s.by_resolution[std::string(to_string(settled.resolution))];
            }
        } catch (const std::exception&) {
            ++s.corrupt_lines;
        }
    }
    try {
        for (const auto& c : latest_cases(contents)) {
            ++s.by_certification[std::string(to_string(c.final_status))];
            if (c.artifact.axiomatized_steps > 0) {
                ++s.axiomatized_cases;
            }
        }
    } catch (const std::exception&) {
        ++s.corrupt_lines;
    }
    if (s.traces > 0) {
        s.mean_difficulty = static_cast<double>(difficulty_total) / static_cast<double>(s.traces);
        s.solved_fraction = static_cast<double>(s.solved) / static_cast<double>(s.traces);
    }
    return s;
}

std::string format_summary(const ArchiveSummary& s) {
    std::ostringstream os;
    os << "records: " << s.records << "\n";
    if (s.corrupt_lines > 0) {
        os << "corrupt records skipped: " << s.corrupt_lines << "\n";
    }
    os << "runs: " << s.traces << "\n";
    for (const auto& [k, v] : s.by_terminal) {
        os << "  " << k << ": " << v << "\n";
    }
    os << std::fixed << std::setprecision(2);
    os << "mean difficulty index: " << s.mean_difficulty << "\n";
    os << "solved: " << s.solved << "/" << s.traces << " (" << s.solved_fraction * 100.0
       << "%)\n";
    if (!s.by_resolution.empty()) {
        os << "research resolutions:\n";
        for (const auto& [k, v] : s.by_resolution) {
            os << "  " << k << ": " << v << "\n";
        }
    }
    if (!s.by_certification.empty()) {
        os << "certification:\n";
        for (const auto& [k, v] : s.by_certification) {
            os << "  " << k << ": " << v << "\n";
        }
    }
    if (s.axiomatized_cases > 0) {
        os << "WARNING: " << s.axiomatized_cases
           << " artifact(s) contain axiomatized steps; their certification is partial\n";
    }
    return os.str();
}

} // namespace ttvr::archive
