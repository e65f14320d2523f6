#include "ttvr/core/serialize.hpp"
#include "ttvr/engine/ttvr.hpp"
#include "ttvr/research/research.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <chrono>

using namespace ttvr;
using namespace ttvr::research;
namespace fx = ttvr::fixtures;
namespace match = ttvr::llm::match;

namespace {

const ResearchGoal kGoal{"improve gradient descent in machine learning", "optimization"};
const ResearchGoal kGraphGoal{"bounds on graph invariants", "graph theory"};

RunConfig config(int n = 4) {
    RunConfig c;
    c.max_iterations = n;
    return c;
}

std::vector<ConjectureCandidate> reviewed(llm::Backend& backend) {
    llm::Session session(5);
    auto seeds = generate_seeds(kGraphGoal, backend, session);
    EXPECT_TRUE(seeds);
    auto list = review_literature(kGraphGoal, *seeds, backend, session);
    EXPECT_TRUE(list);
    return list->candidates;
}

/// Routes calls whose tag contains `needle` to `special`, all others to
/// `fallback`.
class SplitBackend final : public llm::Backend {
public:
    SplitBackend(std::string needle, std::shared_ptr<llm::Backend> special,
                 std::shared_ptr<llm::Backend> fallback)
        : needle_(std::move(needle)), special_(std::move(special)), fallback_(std::move(fallback)) {}
    [[nodiscard]] std::string id() const override { return "split"; }

private:
    llm::CompletionResult do_complete(const llm::CompletionRequest& r) override {
        return r.call_tag.find(needle_) != std::string::npos ? special_->complete(r)
                                                             : fallback_->complete(r);
    }
    std::string needle_;
    std::shared_ptr<llm::Backend> special_;
    std::shared_ptr<llm::Backend> fallback_;
};

std::shared_ptr<llm::ScriptedBackend> reply(std::string text) {
    return std::make_shared<llm::ScriptedBackend>(
        std::vector<llm::ScriptEntry>{{match::any(), std::move(text)}});
}

ConjectureCandidate candidate(const std::string& id, std::string conclusion) {
    ConjectureCandidate c;
    c.title = id;
    c.statement = fx::statement(id, {"G is connected"}, std::move(conclusion));
    c.statement.source = StatementSource::ResearchMode;
    return c;
}

} // namespace

TEST(Goal, Validation) {
    EXPECT_NO_THROW(validate(kGoal));
    EXPECT_THROW(validate(ResearchGoal{" ", "x"}), ValidationError);
}

TEST(Enums, RoundTrip) {
    for (auto r : {Resolution::Proved, Resolution::Refuted, Resolution::Unsettled}) {
        EXPECT_EQ(parse_resolution(to_string(r)), r);
    }
    for (auto o : {CandidateOrigin::Seeder, CandidateOrigin::LiteratureReviewer,
                   CandidateOrigin::Predictor}) {
        EXPECT_EQ(parse_candidate_origin(to_string(o)), o);
    }
    EXPECT_THROW((void)parse_resolution("MAYBE"), std::invalid_argument);
}

TEST(ParseItems, SectionsAndFields) {
    const std::string out = "Intro text\n1. not in section\nCONJECTURES:\n"
                            "1. First\nPREMISE: a\nPREMISE: b\nCONCLUSION: c\n"
                            "2) Second claim without fields\n"
                            "3.\nCONCLUSION: d\n"
                            "NOTES:\n4. ignored\n";
    const auto items = parse_items(out, "CONJECTURES");
    ASSERT_EQ(items.size(), 3u);
    EXPECT_EQ(items[0].title, "First");
    EXPECT_EQ(items[0].premises, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(items[0].conclusion, "c");
    EXPECT_EQ(items[1].conclusion, "Second claim without fields");
    EXPECT_TRUE(items[1].premises.empty());
    EXPECT_EQ(items[2].conclusion, "d");
    EXPECT_TRUE(parse_items(out, "STATEMENTS").empty());
}

TEST(ParseItems, FormatRoundTrip) {
    std::vector<ConjectureCandidate> cs{candidate("a", "x < 1"), candidate("b", "y > 2")};
    cs[1].statement.premises.clear();
    const auto items = parse_items("CONJECTURES:\n" + format_items(cs), "CONJECTURES");
    ASSERT_EQ(items.size(), 2u);
    EXPECT_EQ(items[0].premises, cs[0].statement.premises);
    EXPECT_EQ(items[0].conclusion, "x < 1");
    EXPECT_TRUE(items[1].premises.empty());
    EXPECT_EQ(items[1].conclusion, "y > 2");
}

TEST(Seeder, ParsesStatementsAndDefinitions) {
    auto backend = fx::research_backend({});
    llm::Session session(5);
    auto seeds = generate_seeds(kGraphGoal, *backend, session);
    ASSERT_TRUE(seeds);
    ASSERT_EQ(seeds->statements.size(), 2u);
    EXPECT_EQ(seeds->definitions, "A graph G = (V, E) is finite and simple.");
    EXPECT_EQ(seeds->statements[0].id, "graph-theory-seed-1");
    EXPECT_EQ(seeds->statements[0].premises, std::vector<std::string>{"G is a connected graph"});
    EXPECT_EQ(seeds->statements[1].conclusion, "every tree with n vertices has n - 1 edges");
    for (const auto& s : seeds->statements) {
        EXPECT_EQ(s.source, StatementSource::ResearchMode);
        EXPECT_EQ(s.goal_tag, kGraphGoal.guideline);
    }
}

TEST(Seeder, GradientDescentGoal) {
    auto backend = reply("STATEMENTS:\n1. Descent lemma\nPREMISE: f is L-smooth\n"
                         "CONCLUSION: f(x - g/L) <= f(x) - |g|^2/(2L)\n"
                         "2. Convergence\nPREMISE: f is convex and L-smooth\n"
                         "CONCLUSION: gradient descent with step 1/L converges at rate O(1/k)\n");
    llm::RecordingBackend rec(backend);
    llm::Session session(5);
    auto seeds = generate_seeds(kGoal, rec, session);
    ASSERT_TRUE(seeds);
    EXPECT_EQ(seeds->statements.size(), 2u);
    EXPECT_EQ(seeds->statements[1].id, "optimization-seed-2");
    EXPECT_NE(rec.calls()[0].request.user_prompt.find(kGoal.guideline), std::string::npos);
    EXPECT_EQ(rec.calls()[0].request.call_tag.rfind("seeder/goal=", 0), 0u);
}

TEST(Seeder, UnparseableOutputIsStageFailure) {
    llm::Session session(5);
    auto r = generate_seeds(kGoal, *reply("I would rather not."), session);
    ASSERT_FALSE(r);
    EXPECT_EQ(r.error().stage, "seeder");
    EXPECT_FALSE(r.error().backend_error);
}

TEST(Seeder, BackendFailureIsStageFailure) {
    auto faulty = llm::FaultInjectingBackend::failing_calls(reply("x"), 1, 1, llm::ErrorKind::Auth);
    llm::Session session(5);
    auto r = generate_seeds(kGoal, *faulty, session);
    ASSERT_FALSE(r);
    ASSERT_TRUE(r.error().backend_error);
    EXPECT_EQ(r.error().backend_error->kind, llm::ErrorKind::Auth);
}

TEST(Reviewer, FourteenCandidates) {
    auto backend = fx::research_backend({});
    const auto cs = reviewed(*backend);
    ASSERT_EQ(cs.size(), 14u);
    EXPECT_EQ(cs[0].statement.id, "graph-theory-c1");
    EXPECT_EQ(cs[0].title, "Conjecture 1");
    EXPECT_EQ(cs[0].origin, CandidateOrigin::LiteratureReviewer);
    EXPECT_TRUE(cs[13].kept);
    EXPECT_NE(cs[13].statement.conclusion.find(fx::candidate_marker(14)), std::string::npos);
}

TEST(Reviewer, EmptyOutputGivesZeroCandidates) {
    llm::Session session(5);
    SeedResult seeds;
    seeds.statements.push_back(fx::statement("s", {}, "x"));
    auto r = review_literature(kGoal, seeds, *reply("  \n"), session);
    ASSERT_TRUE(r);
    EXPECT_TRUE(r->candidates.empty());
    auto bad = review_literature(kGoal, seeds, *reply("Nothing relevant found."), session);
    EXPECT_FALSE(bad);
}

TEST(Reviewer, DuplicatesRemovedByFingerprint) {
    llm::Session session(5);
    SeedResult seeds;
    seeds.statements.push_back(fx::statement("s", {}, "x"));
    auto r = review_literature(kGoal, seeds,
                               *reply("CONJECTURES:\n1. A\nCONCLUSION: p\n2. B\nCONCLUSION: q\n"
                                      "3. A again\nCONCLUSION: p\n"),
                               session);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->candidates.size(), 2u);
    EXPECT_EQ(r->duplicates, 1);
}

class Preparer : public ::testing::TestWithParam<int> {};

TEST_P(Preparer, KeepsDecidedSubset) {
    const int kept = GetParam();
    auto backend = fx::research_backend({14, kept, 0, 0});
    const auto cs = reviewed(*backend);
    llm::Session session(5);
    auto prepared = prepare_context(kGraphGoal, cs, *backend, session);
    ASSERT_TRUE(prepared);
    EXPECT_EQ(prepared->notation_preamble, "n = |V(G)|, m = |E(G)|.");
    ASSERT_EQ(prepared->candidates.size(), 14u);
    int n = 0;
    for (int i = 0; i < 14; ++i) {
        const auto& c = prepared->candidates[i];
        EXPECT_EQ(c.kept, i < kept);
        if (c.kept) {
            ++n;
            EXPECT_FALSE(c.drop_reason);
        } else {
            EXPECT_EQ(c.drop_reason, "already solved");
        }
    }
    EXPECT_EQ(n, kept);
}

INSTANTIATE_TEST_SUITE_P(Research, Preparer, ::testing::Values(11, 13, 14));

TEST(PreparerRules, UndecidedDroppedAndMissingSectionFails) {
    std::vector<ConjectureCandidate> cs{candidate("a", "p"), candidate("b", "q"),
                                        candidate("c", "r")};
    llm::Session session(5);
    auto r = prepare_context(kGoal, cs, *reply("DECISIONS:\n1. KEEP\n2. DROP\n"), session);
    ASSERT_TRUE(r);
    EXPECT_TRUE(r->candidates[0].kept);
    EXPECT_FALSE(r->candidates[1].kept);
    EXPECT_EQ(r->candidates[1].drop_reason, "dropped by the context preparer");
    EXPECT_FALSE(r->candidates[2].kept);
    EXPECT_EQ(r->candidates[2].drop_reason, "no decision from the context preparer");
    EXPECT_TRUE(r->notation_preamble.empty());

    EXPECT_FALSE(prepare_context(kGoal, cs, *reply("Everything looks good."), session));
}

TEST(Negate, KeepsPremisesAndChangesFingerprint) {
    const auto c = candidate("g-c1", "every G has property P");
    const auto n = negate(c.statement);
    EXPECT_EQ(n.id, "g-c1-neg");
    EXPECT_EQ(n.premises, c.statement.premises);
    EXPECT_EQ(n.conclusion, "It is not the case that: every G has property P");
    EXPECT_NE(statement_fingerprint(n), statement_fingerprint(c.statement));
}

class Refine : public ::testing::Test {
protected:
    ConjectureCandidate cand = candidate("g-c1", "every G has property P");
    engine::RunTrace solved = engine::run_ttvr(cand.statement, config(), *fx::loop_backend(1));
    llm::Session session{5};
};

TEST_F(Refine, UnsolvedRunsAreUnsettledWithoutCall) {
    auto exhausted = engine::run_ttvr(cand.statement, config(2), *fx::loop_backend(0));
    llm::RecordingBackend rec(reply("RESOLUTION: PROVED"));
    const auto s = refine(cand, exhausted, rec, session);
    EXPECT_EQ(s.resolution, Resolution::Unsettled);
    EXPECT_TRUE(rec.calls().empty());
    EXPECT_EQ(s.final_statement, cand.statement);
}

TEST_F(Refine, Proved) {
    llm::RecordingBackend rec(reply("Analysis...\nRESOLUTION: PROVED\n"));
    const auto s = refine(cand, solved, rec, session);
    EXPECT_EQ(s.resolution, Resolution::Proved);
    EXPECT_EQ(s.final_statement, cand.statement);
    ASSERT_EQ(rec.calls().size(), 1u);
    EXPECT_NE(rec.calls()[0].request.user_prompt.find(fx::kProof), std::string::npos);
}

TEST_F(Refine, RefutedUsesInvertedBlock) {
    const auto s = refine(cand, solved,
                          *reply("RESOLUTION: REFUTED\nINVERTED:\nPREMISE: G has 5 vertices\n"
                                 "CONCLUSION: G lacks property P\n"),
                          session);
    EXPECT_EQ(s.resolution, Resolution::Refuted);
    EXPECT_EQ(s.final_statement.premises, std::vector<std::string>{"G has 5 vertices"});
    EXPECT_EQ(s.final_statement.conclusion, "G lacks property P");
    EXPECT_NE(statement_fingerprint(s.final_statement), statement_fingerprint(cand.statement));
    EXPECT_FALSE(s.note);
}

TEST_F(Refine, RefutedWithoutInversionIsNegatedMechanically) {
    const auto s = refine(cand, solved, *reply("RESOLUTION: REFUTED."), session);
    EXPECT_EQ(s.resolution, Resolution::Refuted);
    EXPECT_EQ(s.final_statement, negate(cand.statement));
    EXPECT_EQ(s.note, "inverted statement built mechanically");
}

TEST_F(Refine, UnparseableIsUnsettled) {
    const auto s = refine(cand, solved, *reply("It is complicated."), session);
    EXPECT_EQ(s.resolution, Resolution::Unsettled);
    EXPECT_EQ(s.note, "refiner classification unparseable");
}

TEST_F(Refine, JsonRoundTrip) {
    const auto s = refine(cand, solved, *reply("RESOLUTION: REFUTED"), session);
    EXPECT_EQ(from_line<SettledConjecture>(to_line(s)), s);
    EXPECT_EQ(from_line<ConjectureCandidate>(to_line(cand)), cand);
}

TEST(Pipeline, FourteenReviewedElevenKeptNineRefuted) {
    auto backend = fx::research_backend({14, 11, 9, 0});
    const auto start = std::chrono::steady_clock::now();
    const auto report = run_research(kGraphGoal, config(), *backend);
    EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
    EXPECT_FALSE(report.backend_failure);
    EXPECT_EQ(report.candidates.size(), 14u);
    ASSERT_EQ(report.settled.size(), 11u);
    int refuted = 0;
    int unsettled = 0;
    for (const auto& s : report.settled) {
        if (s.resolution == Resolution::Refuted) {
            ++refuted;
            EXPECT_NE(statement_fingerprint(s.final_statement),
                      statement_fingerprint(s.candidate.statement));
        } else if (s.resolution == Resolution::Unsettled) {
            ++unsettled;
            EXPECT_EQ(s.trace.terminal, ProofStatus::Exhausted);
        }
    }
    EXPECT_EQ(refuted, 9);
    EXPECT_EQ(unsettled, 2);
}

TEST(Pipeline, TwoKeptProvedAndUnsettled) {
    auto backend = fx::research_backend({14, 2, 0, 1});
    llm::RecordingBackend rec(backend);
    std::vector<std::string> stages;
    ResearchOptions options;
    options.on_stage = [&](const StageRecord& r) { stages.push_back(r.stage); };
    const auto report = run_research(kGraphGoal, config(), rec, options);
    ASSERT_EQ(report.settled.size(), 2u);
    EXPECT_EQ(report.settled[0].resolution, Resolution::Proved);
    EXPECT_EQ(report.settled[1].resolution, Resolution::Unsettled);
    EXPECT_EQ(report.notation_preamble, "n = |V(G)|, m = |E(G)|.");

    EXPECT_EQ(rec.count_tag("seeder/"), 1u);
    EXPECT_EQ(rec.count_tag("literature_reviewer/"), 1u);
    EXPECT_EQ(rec.count_tag("context_preparer/"), 1u);
    EXPECT_EQ(rec.count_tag("predictor/"), 0u);
    EXPECT_EQ(rec.count_tag("refiner/"), 1u);
    for (const auto& c : rec.calls()) {
        if (c.request.call_tag.find("prover") != std::string::npos) {
            EXPECT_NE(c.request.user_prompt.find("n = |V(G)|"), std::string::npos);
        }
    }
    ASSERT_GE(stages.size(), 3u);
    EXPECT_EQ(stages[0], "seeder");
    EXPECT_EQ(stages[1], "literature_reviewer");
    EXPECT_EQ(stages[2], "context_preparer");

    int kept = 0;
    for (const auto& c : report.candidates) {
        kept += c.kept ? 1 : 0;
        EXPECT_EQ(c.kept, !c.drop_reason.has_value());
    }
    EXPECT_EQ(kept, 2);
}

TEST(Pipeline, ZeroKeptWarns) {
    auto backend = fx::research_backend({14, 0, 0, 0});
    llm::RecordingBackend rec(backend);
    const auto report = run_research(kGraphGoal, config(), rec);
    EXPECT_TRUE(report.settled.empty());
    EXPECT_FALSE(report.warnings.empty());
    EXPECT_EQ(rec.count_tag("prover"), 0u);
}

TEST(Pipeline, SeederFailureStopsEarly) {
    const auto report = run_research(kGoal, config(), *reply("no list here"));
    EXPECT_TRUE(report.candidates.empty());
    ASSERT_EQ(report.stages.size(), 1u);
    EXPECT_TRUE(report.stages[0].error);
    EXPECT_FALSE(report.backend_failure);
}

TEST(Pipeline, PredictorAddsCandidates) {
    auto predictor = reply("CONJECTURES:\n1. Predicted\nPREMISE: G is a tree\n"
                           "CONCLUSION: [c99] the invariant of G is at most 1\n");
    SplitBackend backend("predictor/", predictor, fx::research_backend({14, 14, 0, 0}));
    ResearchOptions options;
    options.use_predictor = true;
    const auto report = run_research(kGraphGoal, config(2), backend, options);
    ASSERT_EQ(report.candidates.size(), 15u);
    EXPECT_EQ(report.candidates.back().origin, CandidateOrigin::Predictor);
    EXPECT_EQ(report.candidates.back().statement.id, "graph-theory-p1");
}

TEST(Pipeline, PredictorFailureOnlyWarns) {
    auto faulty = llm::FaultInjectingBackend::failing_calls(reply("x"), 1, 1, llm::ErrorKind::Auth);
    SplitBackend backend("predictor/", faulty, fx::research_backend({14, 11, 9, 0}));
    ResearchOptions options;
    options.use_predictor = true;
    const auto report = run_research(kGraphGoal, config(), backend, options);
    EXPECT_EQ(report.settled.size(), 11u);
    EXPECT_FALSE(report.warnings.empty());
}
