#include "ttvr/engine/trace_io.hpp"
#include "ttvr/research/research.hpp"

namespace ttvr::research {

using json_util::get_optional;
using json_util::put_optional;

namespace {

nlohmann::json candidates_json(const std::vector<ConjectureCandidate>& candidates) {
    return candidates;
}

} // namespace

ResearchReport run_research(const ResearchGoal& goal, const RunConfig& config,
                            llm::Backend& backend, const ResearchOptions& options) {
    validate(goal);
    ttvr::validate(config);
    const ResearchContext& ctx = options.context;
    llm::Session session(config.gateway_error_budget);

    ResearchReport report;
    report.goal = goal;

    auto record = [&](StageRecord stage) {
        if (options.on_stage) {
            options.on_stage(stage);
        }
        report.stages.push_back(std::move(stage));
    };
    auto warn = [&](std::string message) {
        ctx.log.warn(message);
        report.warnings.push_back(std::move(message));
    };
    auto failed = [&](const StageFailure& f) {
        StageRecord stage{f.stage, {}, nlohmann::json::object(), f.message, {}};
        record(std::move(stage));
        warn(f.stage + " failed: " + f.message);
        report.backend_failure = report.backend_failure || f.backend_error.has_value();
    };

    auto seeds = generate_seeds(goal, backend, session, ctx);
    if (!seeds) {
        failed(seeds.error());
        return report;
    }
    record({"seeder", seeds->raw_output,
            {{"definitions", seeds->definitions}, {"statements", seeds->statements}},
            std::nullopt, {}});

    auto reviewed = review_literature(goal, *seeds, backend, session, ctx);
    if (!reviewed) {
        failed(reviewed.error());
        return report;
    }
    {
        StageRecord stage{"literature_reviewer", reviewed->raw_output,
                          {{"candidates", candidates_json(reviewed->candidates)},
                           {"duplicates", reviewed->duplicates}},
                          std::nullopt, {}};
        if (reviewed->candidates.empty()) {
            stage.warnings.emplace_back("no candidates");
        }
        record(std::move(stage));
    }
    std::vector<ConjectureCandidate> candidates = reviewed->candidates;

    if (options.use_predictor && !candidates.empty()) {
        auto predicted = predict_conjectures(goal, candidates, backend, session, ctx);
        if (!predicted) {
            failed(predicted.error());
        } else {
            record({"predictor", predicted->raw_output,
                    {{"candidates", candidates_json(predicted->candidates)}}, std::nullopt, {}});
            candidates.insert(candidates.end(), predicted->candidates.begin(),
                              predicted->candidates.end());
        }
    }

    if (candidates.empty()) {
        warn("no conjecture candidates to prepare");
        return report;
    }

    auto prepared = prepare_context(goal, candidates, backend, session, ctx);
    if (!prepared) {
        failed(prepared.error());
        warn("keeping all candidates without shared notation");
        report.candidates = candidates;
    } else {
        record({"context_preparer", prepared->raw_output,
                {{"notation", prepared->notation_preamble},
                 {"candidates", candidates_json(prepared->candidates)}},
                std::nullopt, {}});
        report.candidates = prepared->candidates;
        report.notation_preamble = prepared->notation_preamble;
    }

    std::vector<ConjectureCandidate> kept;
    std::vector<TheoremStatement> statements;
    for (const auto& c : report.candidates) {
        if (c.kept) {
            kept.push_back(c);
            statements.push_back(c.statement);
        }
    }
    if (kept.empty()) {
        warn("context preparer kept no candidates");
        return report;
    }

    engine::EngineOptions engine_options;
    engine_options.runner = ctx.runner;
    engine_options.log = ctx.log;
    engine_options.notation_preamble = report.notation_preamble;
    engine::BatchOptions batch_options;
    batch_options.parallelism = options.parallelism;
    batch_options.on_run_done = options.on_run_done;
    const auto traces = engine::run_batch(statements, config, backend, engine_options,
                                          batch_options);

    for (std::size_t i = 0; i < kept.size(); ++i) {
        auto settled = refine(kept[i], traces[i], backend, session, ctx, report.notation_preamble);
        if (!settled.refiner_output.empty() || settled.note) {
            StageRecord stage{"refiner", settled.refiner_output,
                              {{"candidate", kept[i].statement.id},
                               {"resolution", to_string(settled.resolution)},
                               {"final_statement", settled.final_statement}},
                              std::nullopt, {}};
            if (settled.note) {
                stage.warnings.push_back(*settled.note);
            }
            record(std::move(stage));
        }
        report.settled.push_back(std::move(settled));
    }
    return report;
}

void to_json(nlohmann::json& j, const ResearchGoal& v) {
    j = {{"guideline", v.guideline}, {"field_tag", v.field_tag}};
}

void from_json(const nlohmann::json& j, ResearchGoal& v) {
    v.guideline = j.at("guideline").get<std::string>();
    v.field_tag = j.value("field_tag", "");
}

void to_json(nlohmann::json& j, const ConjectureCandidate& v) {
    j = {{"title", v.title},
         {"statement", v.statement},
         {"origin", to_string(v.origin)},
         {"kept", v.kept}};
    put_optional(j, "drop_reason", v.drop_reason);
}

void from_json(const nlohmann::json& j, ConjectureCandidate& v) {
    v.title = j.value("title", "");
    v.statement = j.at("statement").get<TheoremStatement>();
    v.origin = parse_candidate_origin(j.at("origin").get<std::string>());
    v.kept = j.at("kept").get<bool>();
    v.drop_reason = get_optional<std::string>(j, "drop_reason");
}

void to_json(nlohmann::json& j, const SettledConjecture& v) {
    j = {{"candidate", v.candidate},
         {"trace", v.trace},
         {"resolution", to_string(v.resolution)},
         {"final_statement", v.final_statement},
         {"refiner_output", v.refiner_output}};
    put_optional(j, "note", v.note);
}

void from_json(const nlohmann::json& j, SettledConjecture& v) {
    v.candidate = j.at("candidate").get<ConjectureCandidate>();
    v.trace = j.at("trace").get<engine::RunTrace>();
    v.resolution = parse_resolution(j.at("resolution").get<std::string>());
    v.final_statement = j.at("final_statement").get<TheoremStatement>();
    v.refiner_output = j.value("refiner_output", "");
    v.note = get_optional<std::string>(j, "note");
}

void to_json(nlohmann::json& j, const StageRecord& v) {
    j = {{"stage", v.stage},
         {"raw_output", v.raw_output},
         {"parsed", v.parsed},
         {"warnings", v.warnings}};
    put_optional(j, "error", v.error);
}

void from_json(const nlohmann::json& j, StageRecord& v) {
    v.stage = j.at("stage").get<std::string>();
    v.raw_output = j.value("raw_output", "");
    v.parsed = j.value("parsed", nlohmann::json::object());
    v.warnings = j.value("warnings", std::vector<std::string>{});
    v.error = get_optional<std::string>(j, "error");
}

} // namespace ttvr::research
