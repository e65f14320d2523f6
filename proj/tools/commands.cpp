#include "commands.hpp"

#include "ttvr/app/config.hpp"
#include "ttvr/archive/archive.hpp"
#include "ttvr/archive/report.hpp"
#include "ttvr/certification/certification.hpp"
#include "ttvr/engine/batch.hpp"
#include "ttvr/core/text.hpp"
#include "ttvr/research/research.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace ttvr::cli {

namespace fs = std::filesystem;
using archive::RecordKind;

namespace {

struct Environment {
    app::AppConfig config;
    EventLog log;
    std::shared_ptr<const agents::TemplateSet> templates;
    std::shared_ptr<const agents::AgentRunner> runner;
    std::shared_ptr<llm::Backend> backend;
};

Environment setup(const Common& common) {
    Environment env;
    env.config = app::load_app_config(common.config);
    if (common.events || env.config.openai.verbose) {
        env.log = EventLog(std::cerr);
    }
    env.templates = std::make_shared<const agents::TemplateSet>(app::load_templates(env.config));
    const std::string model = env.config.backend == "openai" ? env.config.openai.model : "";
    env.runner = std::make_shared<const agents::AgentRunner>(env.templates, model);
    env.backend = app::make_backend(env.config, env.log);
    return env;
}

void snapshot(archive::ArchiveWriter& writer, const Environment& env, const std::string& batch_id,
              std::string_view command) {
    writer.append(RecordKind::ConfigSnapshot,
                  archive::config_payload(env.config.run, {{"app", app::describe(env.config)},
                                                           {"batch_id", batch_id},
                                                           {"command", command}}));
    auto templates = archive::template_payload(env.templates->snapshot());
    templates["batch_id"] = batch_id;
    writer.append(RecordKind::TemplateSnapshot, std::move(templates));
}

/// Formalizes an accepted proof and runs the checker when one is configured.
certification::CertificationCase certify(const Environment& env, const TheoremStatement& statement,
                                         const ProofAttempt& proof, llm::Session& session,
                                         const std::string& notation) {
    certification::FormalizeOptions options;
    options.runner = env.runner;
    options.notation_preamble = notation;
    options.tag_context = "run=" + statement_fingerprint(statement).substr(0, 8);
    auto formal = certification::formalize(statement, proof, env.config.run, *env.backend,
                                           session, options);
    if (!formal) {
        return certification::open_case(statement, proof, {},
                                        "formalizer backend error: " + formal.error().detail);
    }
    FormalArtifact artifact = formal->artifact;
    if (!formal->failure && env.config.checker) {
        artifact = certification::run_checker(std::move(artifact), *env.config.checker);
    }
    return certification::open_case(statement, proof, std::move(artifact), formal->failure);
}

std::string default_batch_id() {
    std::string t = utc_timestamp();
    for (char& c : t) {
        if (c == ':') {
            c = '-';
        }
    }
    return t;
}

void print_case_line(std::ostream& out, const certification::CertificationCase& c) {
    out << "  case " << c.case_id << ": " << to_string(c.artifact.checker_outcome) << " -> "
        << to_string(c.final_status);
    if (c.artifact.axiomatized_steps > 0) {
        out << " (" << c.artifact.axiomatized_steps << " axiomatized steps)";
    }
    if (c.formalization_failure) {
        out << " [" << *c.formalization_failure << "]";
    }
    out << "\n";
}

} // namespace

int prove(const Common& common, const ProveArgs& args) {
    const auto statements = engine::load_statements(args.statements);
    Environment env = setup(common);
    archive::ArchiveWriter writer(env.config.archive, {env.config.archive_sync});
    const std::string batch_id = args.batch_id.empty() ? default_batch_id() : args.batch_id;
    snapshot(writer, env, batch_id, "prove");

    std::string notation;
    if (env.config.run.context_preparer_in_default_mode && !statements.empty()) {
        research::ResearchGoal goal{"Prove the statements listed below.", ""};
        std::vector<research::ConjectureCandidate> items;
        for (const auto& s : statements) {
            items.push_back({s.id, s, research::CandidateOrigin::Seeder, true, std::nullopt});
        }
        llm::Session session(env.config.run.gateway_error_budget);
        auto prepared = research::prepare_context(goal, items, *env.backend, session,
                                                  {env.runner, env.log});
        research::StageRecord stage{"context_preparer", {}, nlohmann::json::object(), {}, {}};
        if (prepared) {
            notation = prepared->notation_preamble;
            stage.raw_output = prepared->raw_output;
            stage.parsed = {{"notation", notation}};
        } else {
            stage.error = prepared.error().message;
            std::cerr << "warning: context preparer failed: " << prepared.error().message << "\n";
        }
        writer.append(RecordKind::ResearchStage, archive::stage_payload(goal, stage));
    }

    engine::EngineOptions engine_options{env.runner, env.log, notation};
    engine::BatchOptions batch;
    batch.parallelism = env.config.parallelism;
    bool aborted = false;
    batch.on_run_done = [&](std::size_t, const TheoremStatement& statement,
                            const engine::RunTrace& trace, llm::Session& session) {
        writer.append(RecordKind::Trace, archive::trace_payload(statement, trace, batch_id));
        std::cout << statement.id << ": " << to_string(trace.terminal)
                  << " itn=" << trace.difficulty_index
                  << " gateway_errors=" << trace.gateway_errors << "\n";
        if (trace.terminal == ProofStatus::Aborted) {
            aborted = true;
            if (trace.abort_error) {
                std::cout << "  aborted: " << llm::to_string(trace.abort_error->kind) << " "
                          << trace.abort_error->detail << "\n";
            }
        }
        if (const ProofAttempt* proof = trace.accepted_proof()) {
            auto c = certify(env, statement, *proof, session, notation);
            writer.append(RecordKind::Certification, nlohmann::json(c));
            print_case_line(std::cout, c);
        }
    };
    (void)engine::run_batch(statements, env.config.run, *env.backend, engine_options, batch);
    return aborted ? kBackendFailure : kOk;
}

int research(const Common& common, const ResearchArgs& args) {
    const research::ResearchGoal goal{args.goal, args.field};
    research::validate(goal);
    Environment env = setup(common);
    archive::ArchiveWriter writer(env.config.archive, {env.config.archive_sync});
    const std::string batch_id = default_batch_id();
    snapshot(writer, env, batch_id, "research");

    const fs::path out_dir = args.out_dir.empty() ? fs::path("research-" + batch_id) : args.out_dir;
    fs::create_directories(out_dir);
    int stage_no = 0;

    research::ResearchOptions options;
    options.context = {env.runner, env.log};
    options.use_predictor = args.predictor;
    options.parallelism = env.config.parallelism;
    options.on_stage = [&](const research::StageRecord& stage) {
        writer.append(RecordKind::ResearchStage, archive::stage_payload(goal, stage));
        std::ostringstream name;
        name << std::setw(2) << std::setfill('0') << ++stage_no << "-" << stage.stage;
        std::ofstream(out_dir / (name.str() + ".txt")) << stage.raw_output;
        std::ofstream(out_dir / (name.str() + ".json")) << nlohmann::json(stage).dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
        std::cout << "stage " << stage.stage << (stage.error ? ": FAILED " + *stage.error : "")
                  << "\n";
    };
    options.on_run_done = [&](std::size_t, const TheoremStatement& statement,
                              const engine::RunTrace& trace, llm::Session&) {
        writer.append(RecordKind::Trace, archive::trace_payload(statement, trace, batch_id));
        std::cout << statement.id << ": " << to_string(trace.terminal)
                  << " itn=" << trace.difficulty_index << "\n";
    };

    const auto result = research::run_research(goal, env.config.run, *env.backend, options);

    std::map<std::string, int> counts;
    bool aborted = result.backend_failure;
    llm::Session certify_session(env.config.run.gateway_error_budget);
    for (const auto& s : result.settled) {
        writer.append(RecordKind::ResearchStage, archive::settled_payload(goal, s));
        ++counts[std::string(to_string(s.resolution))];
        aborted = aborted || s.trace.terminal == ProofStatus::Aborted;
        std::cout << s.candidate.statement.id << ": " << to_string(s.resolution);
        if (s.note) {
            std::cout << " (" << *s.note << ")";
        }
        std::cout << "\n";
        if (args.certify && s.resolution != research::Resolution::Unsettled) {
            auto c = certify(env, s.final_statement, *s.trace.accepted_proof(), certify_session,
                             result.notation_preamble);
            writer.append(RecordKind::Certification, nlohmann::json(c));
            print_case_line(std::cout, c);
        }
    }
    std::size_t kept = 0;
    for (const auto& c : result.candidates) {
        kept += c.kept ? 1 : 0;
    }
    std::cout << "candidates: " << result.candidates.size() << ", kept: " << kept;
    for (const auto& [k, v] : counts) {
        std::cout << ", " << k << ": " << v;
    }
    std::cout << "\n";
    for (const auto& w : result.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    std::cout << "stage outputs in " << out_dir.string() << "\n";
    return aborted ? kBackendFailure : kOk;
}

int review(const Common& common, const ReviewArgs& args, std::istream& in, std::ostream& out) {
    const auto config = app::load_app_config(common.config);
    archive::ArchiveWriter writer(config.archive, {config.archive_sync});
    const auto contents = archive::read_archive(config.archive);
    std::string reviewer = args.reviewer;
    if (reviewer.empty()) {
        const char* user = std::getenv("USER");
        reviewer = user != nullptr ? user : "unknown";
    }

    int pending = 0;
    int decided = 0;
    for (const auto& c : archive::latest_cases(contents)) {
        if (!c.review.pending() || c.formalization_failure) {
            continue;
        }
        ++pending;
        out << "\n" << certification::review_view(c) << "\n";
        out << "Does the formal restatement conform to the statement? "
               "[c]onformant / [n]onconformant / [s]kip / [q]uit: "
            << std::flush;
        std::string answer;
        if (!std::getline(in, answer)) {
            break;
        }
        answer = std::string(text::trim(answer));
        if (answer == "q") {
            break;
        }
        if (answer != "c" && answer != "n") {
            continue;
        }
        std::string notes;
        out << "notes (optional): " << std::flush;
        std::getline(in, notes);
        const auto decision =
            answer == "c" ? ReviewDecision::Conformant : ReviewDecision::Nonconformant;
        auto updated = certification::submit_review(c, decision, reviewer, notes);
        writer.append(RecordKind::Certification, nlohmann::json(updated));
        out << "recorded " << to_string(decision) << " -> " << to_string(updated.final_status)
            << "\n";
        ++decided;
    }
    out << decided << " decision(s) recorded, " << pending - decided << " case(s) still pending\n";
    return kOk;
}

int annotate(const Common& common, const AnnotateArgs& args) {
    const auto config = app::load_app_config(common.config);
    archive::ArchiveWriter writer(config.archive, {config.archive_sync});
    const auto cases = archive::latest_cases(archive::read_archive(config.archive));
    const certification::CertificationCase* match = nullptr;
    for (const auto& c : cases) {
        if (c.case_id.rfind(args.case_id, 0) == 0) {
            if (match != nullptr) {
                std::cerr << "ttvr: case prefix '" << args.case_id << "' is ambiguous\n";
                return kFailure;
            }
            match = &c;
        }
    }
    if (match == nullptr) {
        std::cerr << "ttvr: no case '" << args.case_id << "'\n";
        return kFailure;
    }
    auto updated = *match;
    updated.correct_annotation = args.value;
    writer.append(RecordKind::Certification, nlohmann::json(updated));
    std::cout << updated.case_id << ": correct? " << args.value << "\n";
    return kOk;
}

int report(const Common& common, const ReportArgs& args) {
    const auto config = app::load_app_config(common.config);
    const auto contents = archive::read_archive(config.archive);
    const auto rows = archive::difficulty_rows(contents);
    if (rows.empty()) {
        std::cerr << "ttvr: no runs in " << config.archive.string() << "\n";
        return kOk;
    }
    std::cout << archive::render_difficulty_table(rows, archive::parse_table_format(args.format),
                                                  args.label);
    if (contents.corrupt_lines > 0) {
        std::cerr << "warning: " << contents.corrupt_lines << " corrupt record(s) skipped\n";
    }
    return kOk;
}

int summarize(const Common& common) {
    const auto config = app::load_app_config(common.config);
    const auto summary = archive::summarize_archive(archive::read_archive(config.archive));
    std::cout << archive::format_summary(summary);
    return kOk;
}

int init_templates(const fs::path& dir) {
    agents::TemplateSet::builtin().write_directory(dir);
    std::cout << "templates written to " << dir.string() << "\n";
    return kOk;
}

} // namespace ttvr::cli
