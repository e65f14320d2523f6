#include "ttvr/research/research.hpp"

#include "ttvr/agents/statement_text.hpp"
#include "ttvr/core/text.hpp"

#include <array>
#include <map>
#include <regex>
#include <set>

namespace ttvr::research {

using agents::AgentRole;

namespace {

const std::regex kItemStart(R"(^\s*(\d+)[.)](?:\s+(.*))?$)");
const std::regex kSectionHeader(R"(^[A-Z][A-Z _]*:\s*$)");
const std::regex kDecision(R"(^\s*(\d+)[.)]\s*(KEEP|DROP)\b\s*:?\s*(.*)$)", std::regex::icase);

bool has_key(std::string_view trimmed, std::string_view key) {
    return text::starts_with_ci(trimmed, key);
}

std::string after(std::string_view trimmed, std::string_view key) {
    return std::string(text::trim(trimmed.substr(key.size())));
}

void append_words(std::string& field, std::string_view more) {
    if (!field.empty()) {
        field.push_back(' ');
    }
    field.append(more);
}

/// Index of the line whose trimmed text starts with `key`, or lines.size().
std::size_t find_line(const std::vector<std::string_view>& lines, std::string_view key,
                      std::size_t from = 0) {
    for (std::size_t i = from; i < lines.size(); ++i) {
        if (has_key(text::trim(lines[i]), key)) {
            return i;
        }
    }
    return lines.size();
}

std::string id_prefix(const ResearchGoal& goal) {
    std::string slug;
    for (char c : goal.field_tag) {
        if (std::isalnum(static_cast<unsigned char>(c)) != 0) {
            slug.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!slug.empty() && slug.back() != '-') {
            slug.push_back('-');
        }
    }
    while (!slug.empty() && slug.back() == '-') {
        slug.pop_back();
    }
    return slug.empty() ? "research" : slug;
}

std::string goal_tag_context(const ResearchGoal& goal) {
    return "goal=" + sha256_hex(goal.guideline).substr(0, 8);
}

TheoremStatement to_statement(const ParsedItem& item, std::string id, const ResearchGoal& goal) {
    TheoremStatement s;
    s.id = std::move(id);
    s.premises = item.premises;
    s.conclusion = item.conclusion;
    s.source = StatementSource::ResearchMode;
    s.goal_tag = goal.guideline;
    return s;
}

std::shared_ptr<const agents::AgentRunner> runner_of(const ResearchContext& ctx) {
    return ctx.runner ? ctx.runner : std::make_shared<const agents::AgentRunner>();
}

Result<agents::AgentOutput, StageFailure> call_stage(std::string_view stage, AgentRole role,
                                                     const agents::Bindings& bindings,
                                                     llm::Backend& backend, llm::Session& session,
                                                     const ResearchContext& ctx,
                                                     std::string_view tag_context) {
    auto result = agents::run_within_budget(
        *runner_of(ctx), role, bindings, backend, session, tag_context,
        [&](const llm::BackendError& e) {
            ctx.log.emit("backend_error", {{"stage", stage},
                                           {"kind", llm::to_string(e.kind)},
                                           {"detail", e.detail}});
        });
    if (!result) {
        return StageFailure{std::string(stage), "backend error: " + result.error().detail,
                            result.error()};
    }
    return std::move(*result);
}

CandidateList to_candidates(std::string raw, const std::vector<ParsedItem>& items,
                            CandidateOrigin origin, std::string_view id_stem,
                            const ResearchGoal& goal, std::set<std::string>& seen) {
    CandidateList out;
    out.raw_output = std::move(raw);
    int n = 0;
    for (const auto& item : items) {
        ConjectureCandidate c;
        c.title = item.title;
        c.origin = origin;
        c.statement = to_statement(item, std::string(id_stem) + std::to_string(++n), goal);
        if (!seen.insert(statement_fingerprint(c.statement)).second) {
            ++out.duplicates;
            continue;
        }
        out.candidates.push_back(std::move(c));
    }
    return out;
}

} // namespace

void validate(const ResearchGoal& goal) {
    if (text::trim(goal.guideline).empty()) {
        throw ValidationError({"research goal guideline must be non-empty"});
    }
}

std::string_view to_string(CandidateOrigin value) noexcept {
    switch (value) {
    case CandidateOrigin::Seeder: return "SEEDER";
    case CandidateOrigin::LiteratureReviewer: return "LITERATURE_REVIEWER";
    case CandidateOrigin::Predictor: return "PREDICTOR";
    }
    return "?";
}

std::string_view to_string(Resolution value) noexcept {
    switch (value) {
    case Resolution::Proved: return "PROVED";
    case Resolution::Refuted: return "REFUTED";
    case Resolution::Unsettled: return "UNSETTLED";
    }
    return "?";
}

CandidateOrigin parse_candidate_origin(std::string_view name) {
    for (auto v : std::array{CandidateOrigin::Seeder, CandidateOrigin::LiteratureReviewer,
                             CandidateOrigin::Predictor}) {
        if (to_string(v) == name) {
            return v;
        }
    }
    throw std::invalid_argument("unknown candidate origin '" + std::string(name) + "'");
}

Resolution parse_resolution(std::string_view name) {
    for (auto v : std::array{Resolution::Proved, Resolution::Refuted, Resolution::Unsettled}) {
        if (to_string(v) == name) {
            return v;
        }
    }
    throw std::invalid_argument("unknown resolution '" + std::string(name) + "'");
}

std::vector<ParsedItem> parse_items(std::string_view output, std::string_view section) {
    const auto lines = text::lines(output);
    const std::string header = std::string(section) + ":";
    const std::size_t start = find_line(lines, header);
    std::vector<ParsedItem> items;
    if (start == lines.size()) {
        return items;
    }

    enum class Field { Title, Premise, Conclusion } field = Field::Title;
    bool in_item = false;
    std::smatch m;
    for (std::size_t i = start + 1; i < lines.size(); ++i) {
        const auto t = text::trim(lines[i]);
        if (t.empty()) {
            continue;
        }
        const std::string line(t);
        if (std::regex_match(line, kSectionHeader) && !has_key(t, "PREMISE:") &&
            !has_key(t, "CONCLUSION:")) {
            break;
        }
        if (std::regex_match(line, m, kItemStart)) {
            items.push_back({});
            items.back().title = std::string(text::trim(m[2].str()));
            field = Field::Title;
            in_item = true;
            continue;
        }
        if (!in_item) {
            continue;
        }
        auto& item = items.back();
        if (has_key(t, "PREMISE:")) {
            auto p = after(t, "PREMISE:");
            item.premises.push_back(std::move(p));
            field = Field::Premise;
        } else if (has_key(t, "CONCLUSION:")) {
            item.conclusion = after(t, "CONCLUSION:");
            field = Field::Conclusion;
        } else if (field == Field::Premise) {
            append_words(item.premises.back(), t);
        } else if (field == Field::Conclusion) {
            append_words(item.conclusion, t);
        } else {
            append_words(item.title, t);
        }
    }

    std::vector<ParsedItem> out;
    for (auto& item : items) {
        std::erase_if(item.premises, [](const std::string& p) { return text::trim(p).empty(); });
        if (text::trim(item.conclusion).empty()) {
            item.conclusion = item.title;
        }
        if (!text::trim(item.conclusion).empty()) {
            out.push_back(std::move(item));
        }
    }
    return out;
}

std::string format_items(const std::vector<ConjectureCandidate>& candidates) {
    std::string out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        out += std::to_string(i + 1) + ". " + (c.title.empty() ? c.statement.id : c.title) + "\n";
        for (const auto& p : c.statement.premises) {
            out += "PREMISE: " + p + "\n";
        }
        out += "CONCLUSION: " + c.statement.conclusion + "\n";
    }
    return out;
}

Result<SeedResult, StageFailure> generate_seeds(const ResearchGoal& goal, llm::Backend& backend,
                                               llm::Session& session,
                                               const ResearchContext& ctx) {
    validate(goal);
    auto output = call_stage("seeder", AgentRole::Seeder, {{"goal", goal.guideline}}, backend,
                             session, ctx, goal_tag_context(goal));
    if (!output) {
        return output.error();
    }

    SeedResult seeds;
    seeds.raw_output = output->text;
    const auto items = parse_items(seeds.raw_output, "STATEMENTS");
    if (items.empty()) {
        return StageFailure{"seeder", "seeder output has no parseable STATEMENTS list",
                            std::nullopt};
    }
    const auto lines = text::lines(seeds.raw_output);
    const std::size_t defs = find_line(lines, "DEFINITIONS:");
    const std::size_t stmts = find_line(lines, "STATEMENTS:");
    if (defs < stmts) {
        std::string d(after(text::trim(lines[defs]), "DEFINITIONS:"));
        for (std::size_t i = defs + 1; i < stmts; ++i) {
            d += "\n";
            d += lines[i];
        }
        seeds.definitions = std::string(text::trim(d));
    }
    const std::string stem = id_prefix(goal) + "-seed-";
    for (std::size_t i = 0; i < items.size(); ++i) {
        seeds.statements.push_back(to_statement(items[i], stem + std::to_string(i + 1), goal));
    }
    return seeds;
}

Result<CandidateList, StageFailure> review_literature(const ResearchGoal& goal,
                                                      const SeedResult& seeds,
                                                      llm::Backend& backend,
                                                      llm::Session& session,
                                                      const ResearchContext& ctx) {
    validate(goal);
    if (seeds.statements.empty()) {
        throw std::invalid_argument("review_literature requires at least one seed statement");
    }
    std::vector<ConjectureCandidate> seed_items;
    for (const auto& s : seeds.statements) {
        seed_items.push_back({s.id, s, CandidateOrigin::Seeder, true, std::nullopt});
    }
    std::string seed_text;
    if (!seeds.definitions.empty()) {
        seed_text = "DEFINITIONS:\n" + seeds.definitions + "\n";
    }
    seed_text += "STATEMENTS:\n" + format_items(seed_items);

    auto output = call_stage("literature_reviewer", AgentRole::LiteratureReviewer,
                             {{"goal", goal.guideline}, {"seeds", seed_text}}, backend, session,
                             ctx, goal_tag_context(goal));
    if (!output) {
        return output.error();
    }
    if (text::trim(output->text).empty()) {
        ctx.log.warn("literature reviewer returned no text; zero candidates");
        return CandidateList{output->text, {}, 0};
    }
    const auto items = parse_items(output->text, "CONJECTURES");
    if (items.empty()) {
        return StageFailure{"literature_reviewer",
                            "reviewer output has no parseable CONJECTURES list", std::nullopt};
    }
    std::set<std::string> seen;
    auto list = to_candidates(output->text, items, CandidateOrigin::LiteratureReviewer,
                              id_prefix(goal) + "-c", goal, seen);
    if (list.duplicates > 0) {
        ctx.log.warn("duplicate candidates removed", {{"count", list.duplicates}});
    }
    return list;
}

Result<CandidateList, StageFailure>
predict_conjectures(const ResearchGoal& goal, const std::vector<ConjectureCandidate>& reviewed,
                    llm::Backend& backend, llm::Session& session, const ResearchContext& ctx) {
    validate(goal);
    auto output = call_stage("predictor", AgentRole::Predictor,
                             {{"goal", goal.guideline}, {"candidates", format_items(reviewed)}},
                             backend, session, ctx, goal_tag_context(goal));
    if (!output) {
        return output.error();
    }
    std::set<std::string> seen;
    for (const auto& c : reviewed) {
        seen.insert(statement_fingerprint(c.statement));
    }
    auto list = to_candidates(output->text, parse_items(output->text, "CONJECTURES"),
                              CandidateOrigin::Predictor, id_prefix(goal) + "-p", goal, seen);
    if (list.candidates.empty()) {
        ctx.log.warn("predictor proposed no new conjectures");
    }
    return list;
}

Result<PreparedContext, StageFailure>
prepare_context(const ResearchGoal& goal, const std::vector<ConjectureCandidate>& candidates,
                llm::Backend& backend, llm::Session& session, const ResearchContext& ctx) {
    validate(goal);
    if (candidates.empty()) {
        throw std::invalid_argument("prepare_context requires at least one candidate");
    }
    auto output = call_stage("context_preparer", AgentRole::ContextPreparer,
                             {{"goal", goal.guideline}, {"candidates", format_items(candidates)}},
                             backend, session, ctx, goal_tag_context(goal));
    if (!output) {
        return output.error();
    }

    const auto lines = text::lines(output->text);
    const std::size_t decisions_at = find_line(lines, "DECISIONS:");
    if (decisions_at == lines.size()) {
        return StageFailure{"context_preparer", "preparer output has no DECISIONS list",
                            std::nullopt};
    }

    PreparedContext out;
    out.raw_output = output->text;
    const std::size_t notation_at = find_line(lines, "NOTATION:");
    if (notation_at < decisions_at) {
        std::string n(after(text::trim(lines[notation_at]), "NOTATION:"));
        for (std::size_t i = notation_at + 1; i < decisions_at; ++i) {
            n += "\n";
            n += lines[i];
        }
        out.notation_preamble = std::string(text::trim(n));
    }

    std::map<std::size_t, std::optional<std::string>> decided;
    std::smatch m;
    for (std::size_t i = decisions_at + 1; i < lines.size(); ++i) {
        const std::string line(text::trim(lines[i]));
        if (!std::regex_match(line, m, kDecision)) {
            continue;
        }
        const std::size_t number = std::stoul(m[1].str());
        if (number < 1 || number > candidates.size()) {
            ctx.log.warn("decision for unknown candidate ignored", {{"number", number}});
            continue;
        }
        if (decided.count(number) != 0) {
            continue;
        }
        if (text::starts_with_ci(m[2].str(), "KEEP")) {
            decided[number] = std::nullopt;
        } else {
            std::string reason(text::trim(m[3].str()));
            decided[number] = reason.empty() ? "dropped by the context preparer" : reason;
        }
    }

    out.candidates = candidates;
    for (std::size_t i = 0; i < out.candidates.size(); ++i) {
        auto& c = out.candidates[i];
        const auto it = decided.find(i + 1);
        if (it == decided.end()) {
            c.kept = false;
            c.drop_reason = "no decision from the context preparer";
        } else {
            c.kept = !it->second.has_value();
            c.drop_reason = it->second;
        }
    }
    return out;
}

TheoremStatement negate(const TheoremStatement& statement) {
    TheoremStatement out = statement;
    out.id = statement.id + "-neg";
    out.conclusion = "It is not the case that: " + statement.conclusion;
    return out;
}

SettledConjecture refine(const ConjectureCandidate& candidate, const engine::RunTrace& trace,
                         llm::Backend& backend, llm::Session& session,
                         const ResearchContext& ctx, std::string_view notation_preamble) {
    SettledConjecture out;
    out.candidate = candidate;
    out.trace = trace;
    out.final_statement = candidate.statement;

    if (trace.terminal == ProofStatus::Exhausted || trace.terminal == ProofStatus::Aborted) {
        out.resolution = Resolution::Unsettled;
        return out;
    }
    const ProofAttempt* proof = trace.accepted_proof();
    if (proof == nullptr) {
        out.resolution = Resolution::Unsettled;
        out.note = "run has no accepted proof";
        return out;
    }

    auto output = call_stage("refiner", AgentRole::Refiner,
                             {{"statement", agents::format_statement(candidate.statement,
                                                                     notation_preamble)},
                              {"proof", proof->body}},
                             backend, session, ctx,
                             "run=" + trace.statement_fingerprint.substr(0, 8));
    if (!output) {
        out.resolution = Resolution::Unsettled;
        out.note = output.error().message;
        ctx.log.warn("refiner failed", {{"candidate", candidate.statement.id},
                                        {"detail", output.error().message}});
        return out;
    }
    out.refiner_output = output->text;

    const auto lines = text::lines(output->text);
    const std::size_t at = find_line(lines, "RESOLUTION:");
    std::string word = at == lines.size() ? "" : after(text::trim(lines[at]), "RESOLUTION:");
    while (!word.empty() && (word.back() == '.' || word.back() == '*')) {
        word.pop_back();
    }
    if (text::starts_with_ci(word, "PROVED") && word.size() == 6) {
        out.resolution = Resolution::Proved;
        return out;
    }
    if (!(text::starts_with_ci(word, "REFUTED") && word.size() == 7)) {
        out.resolution = Resolution::Unsettled;
        out.note = "refiner classification unparseable";
        ctx.log.warn("refiner classification unparseable", {{"candidate", candidate.statement.id}});
        return out;
    }

    out.resolution = Resolution::Refuted;
    out.final_statement = negate(candidate.statement);
    const std::size_t inverted_at = find_line(lines, "INVERTED:", at + 1);
    if (inverted_at < lines.size()) {
        ParsedItem item;
        for (std::size_t i = inverted_at + 1; i < lines.size(); ++i) {
            const auto t = text::trim(lines[i]);
            if (has_key(t, "PREMISE:")) {
                auto p = after(t, "PREMISE:");
                if (!p.empty()) {
                    item.premises.push_back(std::move(p));
                }
            } else if (has_key(t, "CONCLUSION:")) {
                item.conclusion = after(t, "CONCLUSION:");
            }
        }
        if (!item.conclusion.empty()) {
            TheoremStatement inverted = out.final_statement;
            inverted.premises = item.premises;
            inverted.conclusion = item.conclusion;
            if (statement_fingerprint(inverted) != statement_fingerprint(candidate.statement)) {
                out.final_statement = std::move(inverted);
                return out;
            }
        }
    }
    out.note = "inverted statement built mechanically";
    return out;
}

} // namespace ttvr::research
