#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace ttvr::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kBackendFailure = 3,
    kLockConflict = 4,
};

struct Common {
    std::filesystem::path config = "ttvr.json";
    bool events = false;
};

struct ProveArgs {
    std::filesystem::path statements;
    std::string batch_id;
};

struct ResearchArgs {
    std::string goal;
    std::string field;
    std::filesystem::path out_dir;
    bool predictor = false;
    bool certify = false;
};

struct ReviewArgs {
    std::string reviewer;
};

struct AnnotateArgs {
    std::string case_id;
    std::string value;
};

struct ReportArgs {
    std::string format = "csv";
    std::string label = "problem";
};

int prove(const Common& common, const ProveArgs& args);
int research(const Common& common, const ResearchArgs& args);
int review(const Common& common, const ReviewArgs& args, std::istream& in, std::ostream& out);
int annotate(const Common& common, const AnnotateArgs& args);
int report(const Common& common, const ReportArgs& args);
int summarize(const Common& common);
int init_templates(const std::filesystem::path& dir);

} // namespace ttvr::cli
