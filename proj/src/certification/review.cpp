#include "ttvr/certification/certification.hpp"

#include <sstream>

namespace ttvr::certification {

using json_util::get_optional;
using json_util::put_optional;

std::string make_case_id(const TheoremStatement& statement, const ProofAttempt& proof) {
    return statement_fingerprint(statement).substr(0, 12) + "-" +
           sha256_hex(proof.body).substr(0, 12);
}

CertificationCase open_case(const TheoremStatement& statement, const ProofAttempt& accepted_proof,
                            FormalArtifact artifact,
                            std::optional<std::string> formalization_failure) {
    CertificationCase c;
    c.case_id = make_case_id(statement, accepted_proof);
    c.statement = statement;
    c.accepted_proof = accepted_proof;
    c.artifact = std::move(artifact);
    c.formalization_failure = std::move(formalization_failure);
    c.final_status = decide_validity(c);
    return c;
}

ProofStatus decide_validity(CheckerOutcome checker, ReviewDecision review) noexcept {
    if (checker == CheckerOutcome::Certified && review == ReviewDecision::Conformant) {
        return ProofStatus::Valid;
    }
    if (checker == CheckerOutcome::Certified && review == ReviewDecision::Nonconformant) {
        return ProofStatus::Rejected;
    }
    if (checker == CheckerOutcome::Failed) {
        return ProofStatus::Rejected;
    }
    return ProofStatus::ProvedUncertified;
}

ProofStatus decide_validity(const CertificationCase& c) noexcept {
    return decide_validity(c.artifact.checker_outcome, c.review.decision);
}

CertificationCase submit_review(const CertificationCase& c, ReviewDecision decision,
                                std::string reviewer, std::string notes) {
    CertificationCase next = c;
    next.review = c.review.decide(decision, std::move(reviewer), std::move(notes), utc_timestamp());
    next.final_status = decide_validity(next);
    return next;
}

namespace {

void numbered(std::ostringstream& os, const std::vector<std::string>& items) {
    if (items.empty()) {
        os << "  (none)\n";
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
        os << "  " << i + 1 << ". " << items[i] << '\n';
    }
}

} // namespace

std::string review_view(const CertificationCase& c) {
    const auto declared = extract_restatement(c.artifact.source_text);
    std::ostringstream os;
    os << "case " << c.case_id << "  statement " << c.statement.id << "\n";
    os << "checker: " << to_string(c.artifact.checker_outcome);
    if (c.artifact.axiomatized_steps > 0) {
        os << "  (" << c.artifact.axiomatized_steps << " AXIOMATIZED STEPS)";
    }
    os << "\n\n";

    os << "STATEMENT premises:\n";
    numbered(os, c.statement.premises);
    os << "FORMAL premises:\n";
    if (!declared.premises_block_found) {
        os << "  (no premises block in the artifact)\n";
    } else {
        numbered(os, declared.premises);
    }
    os << "\nSTATEMENT conclusion:\n  " << c.statement.conclusion << "\n";
    os << "FORMAL conclusion:\n";
    if (!declared.conclusion_block_found) {
        os << "  (no conclusion block in the artifact)\n";
    } else {
        for (const auto& line : declared.conclusion) {
            os << "  " << line << '\n';
        }
    }
    return os.str();
}

std::vector<std::string> check(const CertificationCase& c) {
    auto problems = ttvr::check(c.artifact);
    const bool valid_condition = c.artifact.checker_outcome == CheckerOutcome::Certified &&
                                 c.review.decision == ReviewDecision::Conformant;
    if ((c.final_status == ProofStatus::Valid) != valid_condition) {
        problems.emplace_back("VALID iff CERTIFIED and CONFORMANT");
    }
    if (c.final_status != decide_validity(c)) {
        problems.emplace_back("final status disagrees with decide_validity");
    }
    if (c.formalization_failure && c.artifact.checker_outcome != CheckerOutcome::NotRun) {
        problems.emplace_back("a failed formalization cannot have been checked");
    }
    return problems;
}

void to_json(nlohmann::json& j, const CertificationCase& v) {
    j = {{"case_id", v.case_id},
         {"statement", v.statement},
         {"accepted_proof", v.accepted_proof},
         {"artifact", v.artifact},
         {"review", v.review},
         {"final_status", to_string(v.final_status)}};
    put_optional(j, "formalization_failure", v.formalization_failure);
    put_optional(j, "correct_annotation", v.correct_annotation);
}

void from_json(const nlohmann::json& j, CertificationCase& v) {
    v.case_id = j.at("case_id").get<std::string>();
    v.statement = j.at("statement").get<TheoremStatement>();
    v.accepted_proof = j.at("accepted_proof").get<ProofAttempt>();
    v.artifact = j.at("artifact").get<FormalArtifact>();
    v.review = j.at("review").get<ConformanceDecision>();
    v.final_status = parse_proof_status(j.at("final_status").get<std::string>());
    v.formalization_failure = get_optional<std::string>(j, "formalization_failure");
    v.correct_annotation = get_optional<std::string>(j, "correct_annotation");
}

} // namespace ttvr::certification
