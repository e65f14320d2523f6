#include "ttvr/archive/archive.hpp"

#include "ttvr/engine/trace_io.hpp"

#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

namespace ttvr::archive {

using nlohmann::json;

namespace {

constexpr std::string_view kRecordType = "archive_record";

std::string errno_text() { return std::strerror(errno); }

void write_all(int fd, std::string_view data) {
    while (!data.empty()) {
        const ssize_t n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw std::runtime_error("archive write failed: " + errno_text());
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

} // namespace

std::string_view to_string(RecordKind kind) noexcept {
    switch (kind) {
    case RecordKind::Trace: return "TRACE";
    case RecordKind::Certification: return "CERTIFICATION";
    case RecordKind::ResearchStage: return "RESEARCH_STAGE";
    case RecordKind::ConfigSnapshot: return "CONFIG_SNAPSHOT";
    case RecordKind::TemplateSnapshot: return "TEMPLATE_SNAPSHOT";
    }
    return "?";
}

RecordKind parse_record_kind(std::string_view name) {
    for (auto k : std::array{RecordKind::Trace, RecordKind::Certification,
                             RecordKind::ResearchStage, RecordKind::ConfigSnapshot,
                             RecordKind::TemplateSnapshot}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown record kind '" + std::string(name) + "'");
}

std::string to_line(const ArchiveRecord& record) {
    return dump_line(envelope(kRecordType, {{"kind", to_string(record.kind)},
                                            {"sequence", record.sequence},
                                            {"written_at", record.written_at},
                                            {"payload", record.payload}}));
}

ArchiveRecord record_from_line(std::string_view line) {
    const json j = parse_json_line(line);
    check_envelope(j, kRecordType);
    try {
        ArchiveRecord r;
        r.kind = parse_record_kind(j.at("kind").get<std::string>());
        r.sequence = j.at("sequence").get<std::uint64_t>();
        r.written_at = j.at("written_at").get<std::string>();
        r.payload = j.at("payload");
        return r;
    } catch (const std::exception& e) {
        throw FormatError(std::string("archive record: ") + e.what());
    }
}

ArchiveWriter::ArchiveWriter(const std::filesystem::path& path, WriterOptions options)
    : path_(path), options_(options) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0) {
        throw std::runtime_error("cannot open archive " + path.string() + ": " + errno_text());
    }
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
        const bool busy = errno == EWOULDBLOCK;
        const std::string why = errno_text();
        ::close(fd_);
        fd_ = -1;
        if (busy) {
            throw LockError("archive " + path.string() + " is locked by another writer");
        }
        throw std::runtime_error("cannot lock archive " + path.string() + ": " + why);
    }

    const auto existing = read_archive(path);
    if (!existing.records.empty()) {
        next_ = existing.records.back().sequence + 1;
    }

    // A torn final line stays as it is; the next record starts on a new line.
    struct stat st {};
    if (::fstat(fd_, &st) == 0 && st.st_size > 0) {
        char last = '\n';
        if (::pread(fd_, &last, 1, st.st_size - 1) == 1 && last != '\n') {
            write_all(fd_, "\n");
        }
    }
}

ArchiveWriter::~ArchiveWriter() {
    if (fd_ >= 0) {
        ::close(fd_);
    }
}

ArchiveWriter::ArchiveWriter(ArchiveWriter&& other) noexcept
    : path_(std::move(other.path_)), options_(other.options_), fd_(other.fd_), next_(other.next_) {
    other.fd_ = -1;
}

std::uint64_t ArchiveWriter::append(RecordKind kind, json payload) {
    if (fd_ < 0) {
        throw std::logic_error("archive writer is closed");
    }
    ArchiveRecord record{kind, std::move(payload), utc_timestamp(), next_};
    write_all(fd_, to_line(record) + "\n");
    if (options_.sync && ::fsync(fd_) != 0) {
        throw std::runtime_error("archive fsync failed: " + errno_text());
    }
    return next_++;
}

ArchiveContents read_archive(const std::filesystem::path& path) {
    ArchiveContents out;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return out;
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        try {
            auto record = record_from_line(line);
            if (!out.records.empty() && record.sequence <= out.records.back().sequence) {
                ++out.corrupt_lines;
                continue;
            }
            out.records.push_back(std::move(record));
        } catch (const FormatError&) {
            ++out.corrupt_lines;
        }
    }
    return out;
}

json trace_payload(const TheoremStatement& statement, const engine::RunTrace& trace,
                   std::string_view batch_id) {
    return {{"statement", statement}, {"trace", trace}, {"batch_id", batch_id}};
}

TraceEntry trace_from_payload(const json& payload) {
    return {payload.at("statement").get<TheoremStatement>(),
            payload.at("trace").get<engine::RunTrace>(), payload.value("batch_id", "")};
}

json stage_payload(const research::ResearchGoal& goal, const research::StageRecord& stage) {
    return {{"goal", goal}, {"stage", stage}};
}

json settled_payload(const research::ResearchGoal& goal,
                     const research::SettledConjecture& settled) {
    return {{"goal", goal}, {"settled", settled}};
}

json config_payload(const RunConfig& config, json extra) {
    json j = {{"run_config", config}};
    if (extra.is_object()) {
        for (auto& [key, value] : extra.items()) {
            j[key] = value;
        }
    }
    return j;
}

json template_payload(const std::map<std::string, std::string>& snapshot) {
    return {{"templates", snapshot}};
}

std::vector<certification::CertificationCase> latest_cases(const ArchiveContents& contents) {
    std::vector<certification::CertificationCase> out;
    std::map<std::string, std::size_t> index;
    for (const auto& r : contents.records) {
        if (r.kind != RecordKind::Certification) {
            continue;
        }
        auto c = r.payload.get<certification::CertificationCase>();
        const auto it = index.find(c.case_id);
        if (it == index.end()) {
            index.emplace(c.case_id, out.size());
            out.push_back(std::move(c));
        } else {
            out[it->second] = std::move(c);
        }
    }
    return out;
}

} // namespace ttvr::archive
