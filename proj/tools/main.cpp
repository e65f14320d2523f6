#include "commands.hpp"

#include "ttvr/agents/templates.hpp"
#include "ttvr/archive/archive.hpp"
#include "ttvr/certification/certification.hpp"
#include "ttvr/core/model.hpp"
#include "ttvr/core/serialize.hpp"
#include "ttvr/llm/openai.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace ttvr;

    CLI::App app{"Prover/verifier proof search against a chat-completion endpoint"};
    app.require_subcommand(1);

    cli::Common common;
    app.add_option("-c,--config", common.config, "JSON config file")->capture_default_str();
    app.add_flag("--events", common.events, "Write JSON progress events to stderr");

    cli::ProveArgs prove;
    auto* prove_cmd = app.add_subcommand("prove", "Run the verify-revise loop on each statement");
    prove_cmd->add_option("statements", prove.statements, "JSON Lines file of statements")
        ->required()
        ->check(CLI::ExistingFile);
    prove_cmd->add_option("--batch-id", prove.batch_id, "Label stored with every record");

    cli::ResearchArgs research;
    auto* research_cmd =
        app.add_subcommand("research", "Generate, filter and settle conjectures for a goal");
    research_cmd->add_option("goal", research.goal, "One-sentence research goal")->required();
    research_cmd->add_option("--field", research.field, "Field tag used in statement ids");
    research_cmd->add_option("-o,--out", research.out_dir,
                             "Directory for raw stage outputs (default research-<time>)");
    research_cmd->add_flag("--predictor", research.predictor, "Enable the predictor stage");
    research_cmd->add_flag("--certify", research.certify, "Formalize settled conjectures");

    cli::ReviewArgs review;
    auto* review_cmd = app.add_subcommand("review", "Conformance review of pending cases");
    review_cmd->add_option("--reviewer", review.reviewer, "Reviewer name (default $USER)");

    cli::AnnotateArgs annotate;
    auto* annotate_cmd =
        app.add_subcommand("annotate", "Record a human correctness judgement for a case");
    annotate_cmd->add_option("case", annotate.case_id, "Case id or unique prefix")->required();
    annotate_cmd->add_option("value", annotate.value, "Y, N or ?")
        ->required()
        ->check(CLI::IsMember({"Y", "N", "?"}));

    cli::ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "Difficulty table of archived runs");
    report_cmd->add_option("--format", report.format, "csv or table")
        ->check(CLI::IsMember({"csv", "table"}))
        ->capture_default_str();
    report_cmd->add_option("--label", report.label, "Header of the item row")
        ->capture_default_str();

    auto* summarize_cmd = app.add_subcommand("summarize", "Statistics over the archive");

    std::filesystem::path template_dir = "templates";
    auto* init_cmd =
        app.add_subcommand("init-templates", "Write the built-in prompt templates to a directory");
    init_cmd->add_option("dir", template_dir)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage errors share the configuration-error exit code.
        return app.exit(e) == 0 ? cli::kOk : cli::kConfigError;
    }

    try {
        if (*prove_cmd) {
            return cli::prove(common, prove);
        }
        if (*research_cmd) {
            return cli::research(common, research);
        }
        if (*review_cmd) {
            return cli::review(common, review, std::cin, std::cout);
        }
        if (*annotate_cmd) {
            return cli::annotate(common, annotate);
        }
        if (*report_cmd) {
            return cli::report(common, report);
        }
        if (*summarize_cmd) {
            return cli::summarize(common);
        }
        if (*init_cmd) {
            return cli::init_templates(template_dir);
        }
    } catch (const archive::LockError& e) {
        std::cerr << "ttvr: " << e.what() << "\n";
        return cli::kLockConflict;
    } catch (const llm::ConfigError& e) {
        std::cerr << "ttvr: configuration error: " << e.what() << "\n";
        return cli::kConfigError;
    } catch (const certification::CheckerConfigError& e) {
        std::cerr << "ttvr: checker configuration error: " << e.what() << "\n";
        return cli::kConfigError;
    } catch (const agents::TemplateError& e) {
        std::cerr << "ttvr: template error: " << e.what() << "\n";
        return cli::kConfigError;
    } catch (const FormatError& e) {
        std::cerr << "ttvr: " << e.what() << "\n";
        return cli::kConfigError;
    } catch (const ValidationError& e) {
        std::cerr << "ttvr: " << e.what() << "\n";
        return cli::kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "ttvr: " << e.what() << "\n";
        return cli::kFailure;
    }
    return cli::kFailure;
}
