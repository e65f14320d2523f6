#include "ttvr/core/model.hpp"

#include "ttvr/core/text.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <memory>
#include <sstream>

namespace ttvr {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::string out = "validation failed";
    for (const auto& p : problems) {
        out += "; ";
        out += p;
    }
    return out;
}

void throw_if_any(std::vector<std::string> problems) {
    if (!problems.empty()) {
        throw ValidationError(std::move(problems));
    }
}

bool is_blank(std::string_view s) { return text::trim(s).empty(); }

bool is_single_line(std::string_view s) {
    return s.find('\n') == std::string_view::npos && s.find('\r') == std::string_view::npos;
}

bool is_trimmed(std::string_view s) { return text::trim(s).size() == s.size(); }

constexpr std::size_t kMaxQuoteWords = 40;

} // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

ConformanceDecision ConformanceDecision::decide(ReviewDecision outcome, std::string reviewer_id,
                                                std::string review_notes, std::string at) const {
    if (!pending()) {
        throw ImmutableDecisionError("conformance decision already recorded as " +
                                     std::string(to_string(decision)));
    }
    if (outcome == ReviewDecision::Pending) {
        throw std::invalid_argument("a review can only be decided CONFORMANT or NONCONFORMANT");
    }
    ConformanceDecision next;
    next.reviewer = std::move(reviewer_id);
    next.decision = outcome;
    next.notes = std::move(review_notes);
    next.timestamp = std::move(at);
    return next;
}

RunConfig default_run_config() { return RunConfig{}; }

std::vector<std::string> check(const TheoremStatement& statement) {
    std::vector<std::string> problems;
    if (is_blank(statement.id)) {
        problems.emplace_back("id must be non-empty");
    }
    if (is_blank(statement.conclusion)) {
        problems.emplace_back("conclusion must be non-empty");
    }
    for (std::size_t i = 0; i < statement.premises.size(); ++i) {
        if (is_blank(statement.premises[i])) {
            problems.emplace_back("premise " + std::to_string(i + 1) + " is empty");
        }
    }
    return problems;
}

std::vector<std::string> check(const ProofAttempt& attempt) {
    std::vector<std::string> problems;
    if (attempt.iteration < 1) {
        problems.emplace_back("iteration must be >= 1");
    }
    if (is_blank(attempt.body)) {
        problems.emplace_back("proof body must be non-empty");
    }
    return problems;
}

std::vector<std::string> check(const FormalArtifact& artifact) {
    std::vector<std::string> problems;
    if (artifact.checker_outcome == CheckerOutcome::Certified && artifact.checker_log.empty()) {
        problems.emplace_back("CERTIFIED artifact requires a non-empty checker log");
    }
    if (artifact.axiomatized_steps < 0) {
        problems.emplace_back("axiomatized_steps must be >= 0");
    }
    return problems;
}

std::vector<std::string> check(const RunConfig& config) {
    std::vector<std::string> problems;
    if (config.max_iterations < 1) {
        problems.emplace_back("max_iterations (N) must be >= 1");
    }
    if (config.gateway_error_budget < 1) {
        problems.emplace_back("gateway_error_budget (M) must be >= 1");
    }
    if (config.verifier_count != 1 && config.verifier_count != 2) {
        problems.emplace_back("verifier_count must be 1 or 2");
    }
    return problems;
}

void validate(const TheoremStatement& statement) { throw_if_any(check(statement)); }
void validate(const ProofAttempt& attempt) { throw_if_any(check(attempt)); }
void validate(const FormalArtifact& artifact) { throw_if_any(check(artifact)); }
void validate(const RunConfig& config) { throw_if_any(check(config)); }

std::vector<Violation> validate_verdict(const VerifierVerdict& verdict, const ProofAttempt& proof) {
    std::vector<Violation> out;
    if (verdict.verifier_index != 1 && verdict.verifier_index != 2) {
        out.push_back({"verifier_index", "verifier_index must be 1 or 2"});
    }

    if (verdict.decision == Decision::Accept) {
        if (verdict.evidence) {
            out.push_back({"evidence", "evidence must be absent on ACCEPT"});
        }
        if (verdict.position) {
            out.push_back({"position", "position must be absent on ACCEPT"});
        }
        return out;
    }

    if (!verdict.evidence) {
        out.push_back({"evidence", "evidence required"});
    } else if (is_blank(*verdict.evidence) || !is_trimmed(*verdict.evidence) ||
               verdict.evidence->find('\r') != std::string::npos) {
        out.push_back({"evidence", "evidence must be non-blank without surrounding whitespace"});
    }

    if (!verdict.position) {
        out.push_back({"position", "position required"});
        return out;
    }

    const auto& pos = *verdict.position;
    if (is_blank(pos.step_label)) {
        out.push_back({"position.step_label", "step label required"});
    } else if (!is_single_line(pos.step_label) || !is_trimmed(pos.step_label) ||
               pos.step_label.find('|') != std::string::npos) {
        out.push_back({"position.step_label",
                       "step label must be a trimmed single line without '|'"});
    }

    const std::size_t words = text::count_tokens(pos.quote);
    if (words == 0) {
        out.push_back({"position.quote", "quote required"});
        return out;
    }
    if (!is_single_line(pos.quote) || !is_trimmed(pos.quote)) {
        out.push_back({"position.quote", "quote must be a trimmed single line"});
    }
    if (words > kMaxQuoteWords) {
        out.push_back({"position.quote", "quote exceeds 40 words"});
    }
    if (!text::contains(proof.body, pos.quote)) {
        out.push_back({"position.quote", "quote not found"});
    }
    return out;
}

std::string statement_fingerprint(const TheoremStatement& statement) {
    // id, source and goal tag are not part of the digest.
    throw_if_any(check(statement));

    std::string encoded = "ttvr-statement-v1\n";
    for (const auto& premise : statement.premises) {
        encoded += "P" + std::to_string(premise.size()) + ":" + premise + "\n";
    }
    encoded += "C" + std::to_string(statement.conclusion.size()) + ":" + statement.conclusion +
               "\n";

    return sha256_hex(encoded);
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                 &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }

    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        hex.push_back(kHex[digest[i] >> 4]);
        hex.push_back(kHex[digest[i] & 0x0f]);
    }
    return hex;
}

std::string_view to_string(StatementSource value) noexcept {
    switch (value) {
    case StatementSource::UserSupplied: return "USER_SUPPLIED";
    case StatementSource::ResearchMode: return "RESEARCH_MODE";
    }
    return "?";
}

std::string_view to_string(Decision value) noexcept {
    return value == Decision::Accept ? "ACCEPT" : "REJECT";
}

std::string_view to_string(CheckerOutcome value) noexcept {
    switch (value) {
    case CheckerOutcome::Certified: return "CERTIFIED";
    case CheckerOutcome::Failed: return "FAILED";
    case CheckerOutcome::NotRun: return "NOT_RUN";
    }
    return "?";
}

std::string_view to_string(ReviewDecision value) noexcept {
    switch (value) {
    case ReviewDecision::Conformant: return "CONFORMANT";
    case ReviewDecision::Nonconformant: return "NONCONFORMANT";
    case ReviewDecision::Pending: return "PENDING";
    }
    return "?";
}

std::string_view to_string(ProofStatus value) noexcept {
    switch (value) {
    case ProofStatus::ProvedUncertified: return "PROVED_UNCERTIFIED";
    case ProofStatus::Valid: return "VALID";
    case ProofStatus::Rejected: return "REJECTED";
    case ProofStatus::Exhausted: return "EXHAUSTED";
    case ProofStatus::Aborted: return "ABORTED";
    }
    return "?";
}

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view name, const std::array<Enum, N>& values, const char* what) {
    for (Enum v : values) {
        if (to_string(v) == name) {
            return v;
        }
    }
    throw std::invalid_argument(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

} // namespace

StatementSource parse_statement_source(std::string_view name) {
    return parse_enum(name,
                      std::array{StatementSource::UserSupplied, StatementSource::ResearchMode},
                      "statement source");
}

Decision parse_decision(std::string_view name) {
    return parse_enum(name, std::array{Decision::Accept, Decision::Reject}, "decision");
}

CheckerOutcome parse_checker_outcome(std::string_view name) {
    return parse_enum(
        name,
        std::array{CheckerOutcome::Certified, CheckerOutcome::Failed, CheckerOutcome::NotRun},
        "checker outcome");
}

ReviewDecision parse_review_decision(std::string_view name) {
    return parse_enum(name,
                      std::array{ReviewDecision::Conformant, ReviewDecision::Nonconformant,
                                 ReviewDecision::Pending},
                      "review decision");
}

ProofStatus parse_proof_status(std::string_view name) {
    return parse_enum(name,
                      std::array{ProofStatus::ProvedUncertified, ProofStatus::Valid,
                                 ProofStatus::Rejected, ProofStatus::Exhausted,
                                 ProofStatus::Aborted},
                      "proof status");
}

std::string utc_timestamp() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const auto ms = duration_cast<milliseconds>(now.time_since_epoch()) % 1000;
    const std::time_t t = system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0')
       << ms.count() << 'Z';
    return os.str();
}

} // namespace ttvr
