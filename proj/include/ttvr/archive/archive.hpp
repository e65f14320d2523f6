#pragma once

#include "ttvr/certification/certification.hpp"
#include "ttvr/core/serialize.hpp"
#include "ttvr/engine/ttvr.hpp"
#include "ttvr/research/research.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttvr::archive {

enum class RecordKind { Trace, Certification, ResearchStage, ConfigSnapshot, TemplateSnapshot };

[[nodiscard]] std::string_view to_string(RecordKind kind) noexcept;
[[nodiscard]] RecordKind parse_record_kind(std::string_view name);

struct ArchiveRecord {
    RecordKind kind = RecordKind::Trace;
    nlohmann::json payload;
    std::string written_at;
    std::uint64_t sequence = 0;

    bool operator==(const ArchiveRecord&) const = default;
};

[[nodiscard]] std::string to_line(const ArchiveRecord& record);
/// Throws FormatError.
[[nodiscard]] ArchiveRecord record_from_line(std::string_view line);

/// Another process (or another writer in this process) holds the archive.
class LockError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct WriterOptions {
    /// fsync after every append.
    bool sync = true;
};

/// Exclusive appender. The lock is held for the writer's lifetime and
/// released on destruction. Sequences continue from the last valid record
/// already in the file; existing bytes are never modified.
class ArchiveWriter {
public:
    /// Throws LockError when the archive is already open for writing.
    explicit ArchiveWriter(const std::filesystem::path& path, WriterOptions options = {});
    ~ArchiveWriter();
    ArchiveWriter(ArchiveWriter&& other) noexcept;
    ArchiveWriter& operator=(ArchiveWriter&&) = delete;
    ArchiveWriter(const ArchiveWriter&) = delete;
    ArchiveWriter& operator=(const ArchiveWriter&) = delete;

    std::uint64_t append(RecordKind kind, nlohmann::json payload);

    [[nodiscard]] std::uint64_t next_sequence() const noexcept { return next_; }
    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    WriterOptions options_;
    int fd_ = -1;
    std::uint64_t next_ = 1;
};

struct ArchiveContents {
    std::vector<ArchiveRecord> records;
    /// Lines that failed to parse or broke the sequence order; skipped.
    int corrupt_lines = 0;
};

/// Reads every valid record. A missing file reads as empty.
[[nodiscard]] ArchiveContents read_archive(const std::filesystem::path& path);

// Payload shapes for each record kind.

struct TraceEntry {
    TheoremStatement statement;
    engine::RunTrace trace;
    std::string batch_id;
};

[[nodiscard]] nlohmann::json trace_payload(const TheoremStatement& statement,
                                           const engine::RunTrace& trace,
                                           std::string_view batch_id = {});
[[nodiscard]] TraceEntry trace_from_payload(const nlohmann::json& payload);

[[nodiscard]] nlohmann::json stage_payload(const research::ResearchGoal& goal,
                                           const research::StageRecord& stage);
[[nodiscard]] nlohmann::json settled_payload(const research::ResearchGoal& goal,
                                             const research::SettledConjecture& settled);

[[nodiscard]] nlohmann::json config_payload(const RunConfig& config, nlohmann::json extra = {});
[[nodiscard]] nlohmann::json template_payload(const std::map<std::string, std::string>& snapshot);

/// Latest record per case id, in order of first appearance.
[[nodiscard]] std::vector<certification::CertificationCase>
latest_cases(const ArchiveContents& contents);

} // namespace ttvr::archive
