#include "ttvr/agents/verdict.hpp"

#include "ttvr/core/text.hpp"

#include <optional>
#include <vector>

namespace ttvr::agents {

namespace {

constexpr std::string_view kVerdictKey = "VERDICT:";
constexpr std::string_view kPositionKey = "POSITION:";
constexpr std::string_view kEvidenceKey = "EVIDENCE:";

std::string_view after_key(std::string_view trimmed_line, std::string_view key) {
    return text::trim(trimmed_line.substr(key.size()));
}

std::optional<ProofPosition> parse_position(std::string_view rest) {
    const auto bar = rest.find('|');
    if (bar == std::string_view::npos) {
        return std::nullopt;
    }
    const std::string_view label = text::trim(rest.substr(0, bar));
    const std::string_view quoted = text::trim(rest.substr(bar + 1));
    if (quoted.size() < 2 || quoted.front() != '"' || quoted.back() != '"') {
        return std::nullopt;
    }
    return ProofPosition{std::string(label), std::string(quoted.substr(1, quoted.size() - 2))};
}

std::string join_lines(const std::vector<std::string_view>& lines, std::size_t first,
                       std::size_t last, std::string_view head) {
    std::string out(head);
    for (std::size_t i = first; i < last; ++i) {
        out.push_back('\n');
        out.append(lines[i]);
    }
    return std::string(text::trim(out));
}

} // namespace

Result<VerifierVerdict, MalformedVerdict> parse_verdict(std::string_view raw,
                                                        const ProofAttempt& proof,
                                                        int verifier_index) {
    const auto lines = text::lines(raw);

    std::size_t marker = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (text::trim(lines[i]).substr(0, kVerdictKey.size()) == kVerdictKey) {
            marker = i;
            break;
        }
    }
    if (marker == lines.size()) {
        return MalformedVerdict{"no VERDICT marker line"};
    }

    const std::string_view word = after_key(text::trim(lines[marker]), kVerdictKey);
    VerifierVerdict verdict;
    verdict.verifier_index = verifier_index;
    if (word == "ACCEPT") {
        verdict.decision = Decision::Accept;
        return verdict;
    }
    if (word != "REJECT") {
        return MalformedVerdict{"VERDICT must be ACCEPT or REJECT, got '" + std::string(word) + "'"};
    }
    verdict.decision = Decision::Reject;

    std::size_t position_line = lines.size();
    std::size_t evidence_line = lines.size();
    for (std::size_t i = marker + 1; i < lines.size(); ++i) {
        const auto t = text::trim(lines[i]);
        if (position_line == lines.size() && t.substr(0, kPositionKey.size()) == kPositionKey) {
            position_line = i;
        } else if (evidence_line == lines.size() &&
                   t.substr(0, kEvidenceKey.size()) == kEvidenceKey) {
            evidence_line = i;
        }
    }
    if (position_line == lines.size()) {
        return MalformedVerdict{"REJECT without POSITION block"};
    }
    if (evidence_line == lines.size()) {
        return MalformedVerdict{"REJECT without EVIDENCE block"};
    }

    auto position = parse_position(after_key(text::trim(lines[position_line]), kPositionKey));
    if (!position) {
        return MalformedVerdict{"POSITION must read: <step label> | \"<quote>\""};
    }
    verdict.position = std::move(position);

    // Evidence runs to the end of the output, or up to a POSITION block that
    // follows it.
    const std::size_t evidence_end = position_line > evidence_line ? position_line : lines.size();
    verdict.evidence = join_lines(lines, evidence_line + 1, evidence_end,
                                  after_key(text::trim(lines[evidence_line]), kEvidenceKey));

    const auto violations = validate_verdict(verdict, proof);
    if (!violations.empty()) {
        std::string reason;
        for (const auto& v : violations) {
            if (!reason.empty()) {
                reason += "; ";
            }
            reason += v.message;
        }
        return MalformedVerdict{reason};
    }
    return verdict;
}

std::string format_verdict(const VerifierVerdict& verdict) {
    if (verdict.decision == Decision::Accept) {
        return "VERDICT: ACCEPT\n";
    }
    std::string out = "VERDICT: REJECT\n";
    if (verdict.position) {
        out += "POSITION: " + verdict.position->step_label + " | \"" + verdict.position->quote +
               "\"\n";
    }
    if (verdict.evidence) {
        out += "EVIDENCE: " + *verdict.evidence + "\n";
    }
    return out;
}

VerifierVerdict unparseable_verdict(const ProofAttempt& proof, int verifier_index) {
    std::string_view first_line;
    for (auto line : text::lines(proof.body)) {
        if (!text::trim(line).empty()) {
            first_line = text::trim(line);
            break;
        }
    }
    // Cut after at most 12 tokens, keeping the original spacing.
    std::size_t tokens = 0;
    std::size_t end = 0;
    bool in_token = false;
    for (std::size_t i = 0; i < first_line.size(); ++i) {
        if (text::is_space(first_line[i])) {
            in_token = false;
            continue;
        }
        if (!in_token) {
            in_token = true;
            if (++tokens > 12) {
                break;
            }
        }
        end = i + 1;
    }

    VerifierVerdict v;
    v.decision = Decision::Reject;
    v.verifier_index = verifier_index;
    v.evidence = std::string(kUnparseableEvidence);
    v.position = ProofPosition{"whole proof", std::string(first_line.substr(0, end))};
    return v;
}

} // namespace ttvr::agents
