// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "ttvr/agents/verdict.hpp"
#include "ttvr/archive/archive.hpp"
#include "ttvr/archive/report.hpp"
#include "ttvr/certification/certification.hpp"
#include "ttvr/engine/ttvr.hpp"
#include "ttvr/research/research.hpp"

#include "fixtures.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace ttvr;
namespace fx = ttvr::fixtures;
namespace match = ttvr::llm::match;
using Clock = std::chrono::steady_clock;

namespace {

/// Collects the first failure of a criterion.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && failure_.empty()) {
            failure_ = what;
        }
    }
    [[nodiscard]] bool ok() const { return failure_.empty(); }
    [[nodiscard]] const std::string& failure() const { return failure_; }

private:
    std::string failure_;
};

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt_ms(double ms) {
    std::ostringstream os;
    os.precision(1);
    os << std::fixed << ms << " ms";
    return os.str();
}

RunConfig standard_config() {
    RunConfig c;
    c.max_iterations = 15;
    c.gateway_error_budget = 5;
    c.verifier_count = 2;
    return c;
}

const TheoremStatement kStatement =
    fx::statement("sum-of-odds", {"n is a positive integer"},
                  "the sum of the first n odd numbers is n^2");

// 1 -----------------------------------------------------------------------

std::string loop_shape(Checks& c) {
    double worst = 0;
    for (int k = 1; k <= 15; ++k) {
        const auto start = Clock::now();
        const auto t = engine::run_ttvr(kStatement, standard_config(), *fx::loop_backend(k));
        worst = std::max(worst, ms_since(start));
        c.expect(t.terminal == ProofStatus::ProvedUncertified && t.difficulty_index == k,
                 "accept at k=" + std::to_string(k) + " gave " +
                     std::string(to_string(t.terminal)) + " itn=" +
                     std::to_string(t.difficulty_index));
    }
    auto start = Clock::now();
    const auto exhausted = engine::run_ttvr(kStatement, standard_config(), *fx::loop_backend(0));
    worst = std::max(worst, ms_since(start));
    c.expect(exhausted.terminal == ProofStatus::Exhausted && exhausted.difficulty_index == 15,
             "never-accepting verifiers did not give EXHAUSTED at 15");

    auto faulty = llm::FaultInjectingBackend::failing_calls(fx::loop_backend(3), 1, 5,
                                                           llm::ErrorKind::Gateway);
    start = Clock::now();
    const auto aborted = engine::run_ttvr(kStatement, standard_config(), *faulty);
    worst = std::max(worst, ms_since(start));
    c.expect(aborted.terminal == ProofStatus::Aborted && aborted.gateway_errors == 5,
             "5 gateway errors did not abort");
    c.expect(worst < 1000, "a case took " + fmt_ms(worst));
    return "k=1..15 exact, EXHAUSTED at 15, ABORTED after 5 gateway errors, slowest " +
           fmt_ms(worst);
}

// 2 -----------------------------------------------------------------------

std::string attempt_text(int k) {
    return "Step 1. Attempt " + std::to_string(k) +
           ": the claim follows from the lemma.\nStep 2. Hence it holds.";
}

std::string fresh_context(Checks& c) {
    std::vector<llm::ScriptEntry> script;
    for (int k = 1; k <= 5; ++k) {
        const std::string it = "/it=" + std::to_string(k) + "/";
        script.push_back({match::all_of({match::tag_contains("prover"), match::tag_contains(it)}),
                          attempt_text(k)});
    }
    script.push_back({match::all_of({match::tag_contains("verifier"), match::tag_contains("/it=5/")}),
                      std::string("VERDICT: ACCEPT")});
    script.push_back({match::tag_contains("verifier"),
                      fx::reject_reply("follows from the lemma", "Step 1", "Evidence marker E.")});
    llm::RecordingBackend rec(std::make_shared<llm::ScriptedBackend>(script));
    const auto trace = engine::run_ttvr(kStatement, standard_config(), rec);
    const auto calls = rec.calls();

    std::size_t verdicts = 0;
    for (const auto& it : trace.iterations) {
        verdicts += it.verdicts.size() + static_cast<std::size_t>(it.malformed_verdicts);
    }
    const std::size_t provers = rec.count_tag("prover_");
    const std::size_t verifiers = rec.count_tag("verifier_");
    c.expect(trace.difficulty_index == 5, "loop did not accept at iteration 5");
    c.expect(provers == trace.iterations.size(), "prover calls != iterations");
    c.expect(verifiers == verdicts, "verifier calls != verdicts issued");
    c.expect(calls.size() == provers + verifiers, "calls not attributable to agents");

    // Every call is self-contained: system + user prompt only, and the only
    // prior outputs a prompt may carry are the previous iteration's proof
    // and evidence, handed to the revising prover.
    for (std::size_t i = 0; i < calls.size(); ++i) {
        const auto& req = calls[i].request;
        const std::string prompt = req.system_prompt + "\n" + req.user_prompt;
        const bool revise = req.call_tag.rfind("prover_revise/", 0) == 0;
        const bool verifier = req.call_tag.rfind("verifier_", 0) == 0;
        int iteration = 0;
        std::sscanf(req.call_tag.c_str() + req.call_tag.find("/it=") + 4, "%d", &iteration);
        for (int k = 1; k <= 5; ++k) {
            const bool present = prompt.find("Attempt " + std::to_string(k) + ":") != std::string::npos;
            const bool allowed = (revise && k == iteration - 1) || (verifier && k == iteration);
            c.expect(present == allowed, req.call_tag + " carries attempt " + std::to_string(k));
        }
        c.expect(verifier || revise || prompt.find("Evidence marker E.") == std::string::npos,
                 req.call_tag + " carries verifier evidence");
        c.expect(!verifier || prompt.find("Evidence marker E.") == std::string::npos,
                 req.call_tag + " carries another verifier's output");
    }

    // Research stages are deployed once each.
    llm::RecordingBackend research_rec(fx::research_backend({14, 11, 9, 0}));
    RunConfig rc = standard_config();
    rc.max_iterations = 3;
    const auto report = research::run_research({"graph invariants", "graphs"}, rc, research_rec);
    c.expect(research_rec.count_tag("seeder/") == 1 &&
                 research_rec.count_tag("literature_reviewer/") == 1 &&
                 research_rec.count_tag("context_preparer/") == 1,
             "research stage called more than once");
    c.expect(research_rec.count_tag("refiner/") == 9, "refiner not once per settled candidate");
    return std::to_string(calls.size()) + " calls = " + std::to_string(provers) + " prover + " +
           std::to_string(verifiers) + " verifier instantiations; no carried state; research " +
           "stages deployed once";
}

// 3 -----------------------------------------------------------------------

/// Review oracle: conformant iff the artifact restates exactly the
/// statement's premises and conclusion.
ReviewDecision oracle(const certification::CertificationCase& cs) {
    const auto r = certification::extract_restatement(cs.artifact.source_text);
    const bool same = r.premises_block_found && r.conclusion_block_found &&
                      r.premises == cs.statement.premises &&
                      r.conclusion == std::vector<std::string>{cs.statement.conclusion};
    return same ? ReviewDecision::Conformant : ReviewDecision::Nonconformant;
}

std::string lean_for(const TheoremStatement& s, bool tamper) {
    std::string out = "-- BEGIN PREMISES\n";
    for (const auto& p : s.premises) {
        out += "-- " + (tamper ? p + " and n > 100" : p) + "\n";
    }
    if (s.premises.empty() && tamper) {
        out += "-- False\n";
    }
    out += "-- END PREMISES\n-- BEGIN CONCLUSION\n-- " + s.conclusion +
           "\n-- END CONCLUSION\ntheorem t : True := trivial\n";
    return out;
}

std::string validity_gate(Checks& c) {
    using C = CheckerOutcome;
    using R = ReviewDecision;
    using S = ProofStatus;
    const std::tuple<C, R, S> table[] = {
        {C::Certified, R::Conformant, S::Valid},
        {C::Certified, R::Nonconformant, S::Rejected},
        {C::Certified, R::Pending, S::ProvedUncertified},
        {C::Failed, R::Conformant, S::Rejected},
        {C::Failed, R::Nonconformant, S::Rejected},
        {C::Failed, R::Pending, S::Rejected},
        {C::NotRun, R::Conformant, S::ProvedUncertified},
        {C::NotRun, R::Nonconformant, S::ProvedUncertified},
        {C::NotRun, R::Pending, S::ProvedUncertified},
    };
    for (const auto& [ch, rv, st] : table) {
        c.expect(certification::decide_validity(ch, rv) == st,
                 std::string(to_string(ch)) + "+" + std::string(to_string(rv)));
    }

    certification::CheckerConfig pass;
    pass.command = {"true"};
    certification::CheckerConfig fail;
    fail.command = {"false"};
    int tampered_runs = 0;
    int control_valid = 0;
    for (int i = 0; i < 40; ++i) {
        const bool tamper = i % 4 != 0;
        auto s = fx::statement("s" + std::to_string(i),
                               i % 5 == 0 ? std::vector<std::string>{}
                                          : std::vector<std::string>{"n is odd", "n > " +
                                                                                 std::to_string(i)},
                               "n^2 is odd (" + std::to_string(i) + ")");
        auto backend = fx::loop_backend(1 + i % 3);
        auto formalizer = std::make_shared<llm::ScriptedBackend>(std::vector<llm::ScriptEntry>{
            {match::tag_contains("formalizer"), lean_for(s, tamper)}});
        llm::Session session(5);
        const auto trace = engine::run_ttvr(s, standard_config(), *backend, session);
        const auto* proof = trace.accepted_proof();
        if (proof == nullptr) {
            c.expect(false, "fixture loop did not accept");
            continue;
        }
        auto f = certification::formalize(s, *proof, standard_config(), *formalizer, session);
        if (!f || f->failure) {
            c.expect(false, "fixture formalizer failed");
            continue;
        }
        const auto artifact = certification::run_checker(f->artifact, i % 7 == 3 ? fail : pass);
        auto cs = certification::open_case(s, *proof, artifact);
        cs = certification::submit_review(cs, oracle(cs), "oracle");
        if (tamper) {
            ++tampered_runs;
            c.expect(cs.final_status != ProofStatus::Valid, "tampered case " + cs.case_id +
                                                                " reached VALID");
        } else if (cs.final_status == ProofStatus::Valid) {
            ++control_valid;
        }
    }
    c.expect(control_valid > 0, "no untampered control case reached VALID");
    return "9/9 table entries; " + std::to_string(tampered_runs) +
           " tampered formalizations never VALID; " + std::to_string(control_valid) +
           " untampered controls VALID";
}

// 4 -----------------------------------------------------------------------

std::string random_word(std::mt19937& rng) {
    static const std::vector<std::string> pieces = {"x", "y", "lemma", "n", "=", "2k+1", "$a^2$",
                                                    "≤", "∀", "odd", "(i)", "claim", "thus"};
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    std::uniform_int_distribution<int> len(1, 3);
    std::string w;
    for (int i = len(rng); i > 0; --i) {
        w += pieces[pick(rng)];
    }
    return w;
}

std::string verdict_grammar(Checks& c) {
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> words(1, 50);
    int round_trips = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<std::vector<std::string>> lines(1 + static_cast<std::size_t>(i % 4));
        std::string body;
        for (std::size_t l = 0; l < lines.size(); ++l) {
            const int n = words(rng);
            for (int w = 0; w < n; ++w) {
                lines[l].push_back(random_word(rng));
            }
            body += "Step " + std::to_string(l + 1) + ". ";
            for (std::size_t w = 0; w < lines[l].size(); ++w) {
                body += (w ? " " : "") + lines[l][w];
            }
            body += "\n";
        }
        const ProofAttempt proof{1, body, "t"};

        VerifierVerdict v;
        v.verifier_index = 1 + coin(rng);
        if (coin(rng) == 1) {
            v.decision = Decision::Reject;
            const auto& line = lines[std::uniform_int_distribution<std::size_t>(0, lines.size() - 1)(rng)];
            const std::size_t n = std::min<std::size_t>(line.size(), 40);
            const std::size_t first = std::uniform_int_distribution<std::size_t>(0, line.size() - 1)(rng);
            const std::size_t count =
                std::uniform_int_distribution<std::size_t>(1, std::min(n, line.size() - first))(rng);
            std::string quote;
            for (std::size_t w = first; w < first + count; ++w) {
                quote += (w > first ? " " : "") + line[w];
            }
            v.position = ProofPosition{"Step " + std::to_string(1 + i % 9), quote};
            std::string evidence = random_word(rng);
            for (int e = i % 3; e > 0; --e) {
                evidence += "\n" + random_word(rng) + " " + random_word(rng);
            }
            v.evidence = evidence;
        }
        if (!validate_verdict(v, proof).empty()) {
            c.expect(false, "generator produced an invalid verdict");
            continue;
        }
        auto parsed = agents::parse_verdict(agents::format_verdict(v), proof, v.verifier_index);
        const bool ok = parsed && *parsed == v && validate_verdict(*parsed, proof).empty();
        c.expect(ok, "round trip " + std::to_string(i) + " changed the verdict");
        round_trips += ok ? 1 : 0;
    }

    const std::vector<std::string> corpus = {
        "",
        "The proof looks fine.",
        "VERDICT: YES",
        "VERDICT: reject",
        "VERDICT: REJECT",
        "VERDICT: REJECT\nEVIDENCE: no position",
        "VERDICT: REJECT\nPOSITION: Step 1 | \"follows from the lemma\"",
        "VERDICT: REJECT\nPOSITION: Step 1 follows from the lemma\nEVIDENCE: bad quote syntax",
        "VERDICT: REJECT\nPOSITION: Step 1 | \"this text is not in the proof\"\nEVIDENCE: e",
        "VERDICT: REJECT\nPOSITION: | \"follows from the lemma\"\nEVIDENCE: no label",
        "VERDICT: REJECT\nPOSITION: Step 1 | \"follows from the lemma\"\nEVIDENCE:",
    };
    int requeried = 0;
    for (const auto& raw : corpus) {
        const ProofAttempt proof{1, fx::kProof, "t"};
        c.expect(!agents::parse_verdict(raw, proof), "corpus entry parsed: " + raw);
        auto backend = std::make_shared<llm::ScriptedBackend>(std::vector<llm::ScriptEntry>{
            {match::tag_contains("prover"), std::string(fx::kProof)},
            {match::tag_contains("verifier"), raw}});
        llm::RecordingBackend rec(backend);
        RunConfig one = standard_config();
        one.max_iterations = 1;
        const auto trace = engine::run_ttvr(kStatement, one, rec);
        const bool exactly_one = rec.count_tag("verifier_a/") == 2 &&
                                 trace.iterations.at(0).malformed_verdicts == 2 &&
                                 trace.iterations.at(0).verdicts.at(0).evidence ==
                                     std::string(agents::kUnparseableEvidence);
        c.expect(exactly_one, "corpus entry not re-queried exactly once: " + raw);
        requeried += exactly_one ? 1 : 0;
    }
    return std::to_string(round_trips) + "/1000 round trips; " + std::to_string(requeried) + "/" +
           std::to_string(corpus.size()) + " malformed cases re-queried exactly once";
}

// 5 -----------------------------------------------------------------------

std::string research_fixture(Checks& c) {
    auto backend = fx::research_backend({14, 11, 9, 0});
    const auto start = Clock::now();
    const auto report = research::run_research({"bounds on graph invariants", "graphs"},
                                               standard_config(), *backend);
    const double ms = ms_since(start);
    int kept = 0;
    for (const auto& cand : report.candidates) {
        kept += cand.kept ? 1 : 0;
    }
    int refuted = 0;
    int unsettled = 0;
    int distinct = 0;
    for (const auto& s : report.settled) {
        if (s.resolution == research::Resolution::Refuted) {
            ++refuted;
            if (statement_fingerprint(s.final_statement) !=
                statement_fingerprint(s.candidate.statement)) {
                ++distinct;
            }
        } else if (s.resolution == research::Resolution::Unsettled) {
            ++unsettled;
        }
    }
    c.expect(report.candidates.size() == 14, "reviewed != 14");
    c.expect(kept == 11, "kept != 11");
    c.expect(refuted == 9 && unsettled == 2, "resolution counts differ");
    c.expect(distinct == refuted, "an inverted statement kept the candidate's fingerprint");
    c.expect(ms < 5000, "took " + fmt_ms(ms));
    return std::to_string(report.candidates.size()) + " reviewed -> " + std::to_string(kept) +
           " kept -> " + std::to_string(refuted) + " REFUTED + " + std::to_string(unsettled) +
           " UNSETTLED, " + std::to_string(distinct) + " distinct inverted fingerprints, " +
           fmt_ms(ms);
}

// 6 -----------------------------------------------------------------------

std::string report_fidelity(Checks& c) {
    using archive::DifficultyRow;
    using archive::ItnMarker;
    const std::vector<DifficultyRow> rows = {
        {"1", 9, {}, {}, "Y", ""}, {"2", 7, {}, {}, "Y", ""}, {"3", 3, {}, {}, "Y", "Y"},
        {"4", 6, {}, {}, "Y", ""}, {"5", 5, {}, {}, "Y", ""},
        {"6", ItnMarker::NotApplicable, {}, {}, "NA", "NA"},
    };
    const std::string expected = "problem,1,2,3,4,5,6\n"
                                 "|itn|,9,7,3,6,5,NA\n"
                                 "correct?,Y,Y,Y,Y,Y,NA\n"
                                 "certified?,,,Y,,,NA\n";
    c.expect(archive::render_difficulty_table(rows, archive::TableFormat::Csv) == expected,
             "table CSV differs");
    c.expect(archive::token_length("a  b\tc") == 3, "token_length(\"a  b\\tc\") != 3");

    std::mt19937 rng(7);
    const std::string alphabet = "xy9. \t\n\r\v\f";
    int agree = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string s(std::uniform_int_distribution<std::size_t>(0, 80)(rng), ' ');
        for (auto& ch : s) {
            ch = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
        }
        std::istringstream in(s);
        std::size_t ref = 0;
        for (std::string w; in >> w;) {
            ++ref;
        }
        const bool same = archive::token_length(s) == ref;
        c.expect(same, "token_length disagrees on random string " + std::to_string(i));
        agree += same ? 1 : 0;
    }
    return "table CSV byte-identical; token_length(\"a  b\\tc\")=3; " + std::to_string(agree) +
           "/10000 random strings agree";
}

// 7 -----------------------------------------------------------------------

std::string checker_bridge(Checks& c) {
    fx::TempDir dir;
    auto config = [&](const std::string& name, const std::string& body) {
        certification::CheckerConfig cfg;
        cfg.command = {fx::write_script(dir / name, body).string(), "{source}"};
        cfg.timeout = std::chrono::seconds(1);
        return cfg;
    };
    FormalArtifact a;
    a.source_text = "theorem t : True := trivial";
    const auto start = Clock::now();
    const auto ok = certification::run_checker(a, config("ok.sh", "echo verified \"$1\"\nexit 0"));
    const auto bad = certification::run_checker(a, config("bad.sh", "echo 'error: type mismatch'\nexit 1"));
    const auto slow = certification::run_checker(a, config("slow.sh", "echo started\nsleep 10"));
    const double ms = ms_since(start);
    c.expect(ok.checker_outcome == CheckerOutcome::Certified &&
                 ok.checker_log.find("verified") != std::string::npos,
             "exit 0 stub not CERTIFIED with log");
    c.expect(bad.checker_outcome == CheckerOutcome::Failed &&
                 bad.checker_log.find("type mismatch") != std::string::npos,
             "exit 1 stub not FAILED with log");
    c.expect(slow.checker_outcome == CheckerOutcome::Failed &&
                 slow.checker_log.find("started") != std::string::npos &&
                 slow.checker_log.find("timeout") != std::string::npos,
             "sleeping stub not FAILED(timeout) with log");
    c.expect(ms < 5000, "took " + fmt_ms(ms));
    return "exit 0 -> CERTIFIED, exit 1 -> FAILED, sleep -> FAILED(timeout after 1 s); logs "
           "captured; " + fmt_ms(ms);
}

// 8 -----------------------------------------------------------------------

nlohmann::json payload(int i) { return {{"i", i}, {"text", "record " + std::to_string(i)}}; }

int child(const std::function<int()>& body) {
    std::cout.flush();
    const pid_t pid = ::fork();
    if (pid == 0) {
        int code = 1;
        try {
            code = body();
        } catch (...) {
            code = 1;
        }
        ::_exit(code);
    }
    int status = 0;
    ::waitpid(pid, &status, 0);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string archive_durability(Checks& c) {
    fx::TempDir dir;
    const auto path = dir / "archive.jsonl";
    constexpr int kTotal = 10000;
    constexpr int kFirst = 6000;

    const int first = child([&] {
        archive::ArchiveWriter w(path);
        for (int i = 0; i < kFirst; ++i) {
            (void)w.append(archive::RecordKind::Trace, payload(i));
        }
        return 0;
    });
    c.expect(first == 0, "first writer process failed");

    {
        archive::ArchiveWriter w(path);
        c.expect(w.next_sequence() == kFirst + 1, "restart did not continue the sequence");
        const int second = child([&] {
            try {
                archive::ArchiveWriter intruder(path);
                return 0;
            } catch (const archive::LockError&) {
                return 4;
            }
        });
        c.expect(second == 4, "second writer was not refused");
        for (int i = kFirst; i < kTotal; ++i) {
            (void)w.append(archive::RecordKind::Trace, payload(i));
        }
    }

    const auto contents = archive::read_archive(path);
    c.expect(contents.corrupt_lines == 0, "corrupt lines on read-back");
    c.expect(contents.records.size() == kTotal, "read back " +
                                                    std::to_string(contents.records.size()) +
                                                    " records");
    int identical = 0;
    for (std::size_t i = 0; i < contents.records.size(); ++i) {
        const auto& r = contents.records[i];
        const bool same = r.sequence == i + 1 && r.payload == payload(static_cast<int>(i)) &&
                          r.kind == archive::RecordKind::Trace;
        c.expect(same, "record " + std::to_string(i) + " differs");
        identical += same ? 1 : 0;
    }
    return std::to_string(identical) + "/10000 records identical after a writer-process restart, "
           "sequences 1..10000; concurrent writer refused";
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<std::string(Checks&)>>> criteria = {
        {"loop shape", loop_shape},
        {"fresh context", fresh_context},
        {"validity gate", validity_gate},
        {"verdict grammar", verdict_grammar},
        {"research pipeline fixture", research_fixture},
        {"report fidelity", report_fidelity},
        {"checker bridge", checker_bridge},
        {"archive durability", archive_durability},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checks c;
        std::string detail;
        try {
            detail = criteria[i].second(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const bool ok = c.ok();
        failed += ok ? 0 : 1;
        std::cout << (ok ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << " ("
                  << (ok ? detail : c.failure()) << ")" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
