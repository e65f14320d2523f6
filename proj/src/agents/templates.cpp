#include "ttvr/agents/templates.hpp"

#include "default_templates.hpp"
#include "ttvr/core/text.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ttvr::agents {

namespace {

using NameSet = std::set<std::string, std::less<>>;

constexpr std::string_view kOpen = "{{";
constexpr std::string_view kClose = "}}";

const NameSet& empty_set() {
    static const NameSet s;
    return s;
}

std::string_view trim_trailing(std::string_view s) {
    while (!s.empty() && text::is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

std::string substitute(std::string_view tmpl, const PromptTemplate& spec, const Bindings& bindings) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t pos = 0;
    while (true) {
        const std::size_t open = tmpl.find(kOpen, pos);
        if (open == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        const std::size_t close = tmpl.find(kClose, open + kOpen.size());
        if (close == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        out.append(tmpl.substr(pos, open - pos));
        const std::string_view name =
            text::trim(tmpl.substr(open + kOpen.size(), close - open - kOpen.size()));
        if (auto it = bindings.find(name); it != bindings.end()) {
            out.append(it->second);
        } else if (spec.required_placeholders.count(name) != 0) {
            throw RenderError(std::string(name), "missing binding for placeholder '" +
                                                     std::string(name) + "' in template '" +
                                                     std::string(to_string(spec.role)) + "'");
        }
        pos = close + kClose.size();
    }
    return std::string(text::trim(out));
}

void check_template(const PromptTemplate& tmpl) {
    const auto& required = required_placeholders(tmpl.role);
    const auto& optional = optional_placeholders(tmpl.role);
    NameSet seen;
    for (const auto* part : {&tmpl.system_template, &tmpl.user_template}) {
        for (auto& name : placeholders_in(*part)) {
            if (required.count(name) == 0 && optional.count(name) == 0) {
                throw TemplateError("template '" + std::string(to_string(tmpl.role)) +
                                    "' uses unknown placeholder '" + name + "'");
            }
            seen.insert(std::move(name));
        }
    }
    for (const auto& name : required) {
        if (seen.count(name) == 0) {
            throw TemplateError("template '" + std::string(to_string(tmpl.role)) +
                                "' is missing required placeholder '" + name + "'");
        }
    }
    if (text::trim(tmpl.system_template).empty() || text::trim(tmpl.user_template).empty()) {
        throw TemplateError("template '" + std::string(to_string(tmpl.role)) +
                            "' needs non-empty [system] and [user] sections");
    }
}

} // namespace

std::string_view to_string(AgentRole role) noexcept {
    switch (role) {
    case AgentRole::ProverFirst: return "prover_first";
    case AgentRole::ProverRevise: return "prover_revise";
    case AgentRole::VerifierA: return "verifier_a";
    case AgentRole::VerifierB: return "verifier_b";
    case AgentRole::Formalizer: return "formalizer";
    case AgentRole::LiteratureReviewer: return "literature_reviewer";
    case AgentRole::ContextPreparer: return "context_preparer";
    case AgentRole::Predictor: return "predictor";
    case AgentRole::Refiner: return "refiner";
    case AgentRole::Seeder: return "seeder";
    }
    return "?";
}

AgentRole parse_role(std::string_view name) {
    for (AgentRole role : kAllRoles) {
        if (to_string(role) == name) {
            return role;
        }
    }
    throw std::invalid_argument("unknown agent role '" + std::string(name) + "'");
}

const NameSet& required_placeholders(AgentRole role) {
    static const NameSet prover_first{"statement"};
    static const NameSet prover_revise{"statement", "prev_proof", "evidence", "position"};
    static const NameSet statement_proof{"statement", "proof"};
    static const NameSet goal{"goal"};
    static const NameSet goal_seeds{"goal", "seeds"};
    static const NameSet goal_candidates{"goal", "candidates"};
    switch (role) {
    case AgentRole::ProverFirst: return prover_first;
    case AgentRole::ProverRevise: return prover_revise;
    case AgentRole::VerifierA:
    case AgentRole::VerifierB:
    case AgentRole::Formalizer:
    case AgentRole::Refiner: return statement_proof;
    case AgentRole::Seeder: return goal;
    case AgentRole::LiteratureReviewer: return goal_seeds;
    case AgentRole::ContextPreparer:
    case AgentRole::Predictor: return goal_candidates;
    }
    return empty_set();
}

const NameSet& optional_placeholders(AgentRole role) {
    static const NameSet prover{"conjecture_note"};
    static const NameSet formalizer{"axiomatization"};
    if (is_prover(role)) {
        return prover;
    }
    if (role == AgentRole::Formalizer) {
        return formalizer;
    }
    return empty_set();
}

std::vector<std::string> placeholders_in(std::string_view s) {
    std::vector<std::string> names;
    std::size_t pos = 0;
    while (true) {
        const std::size_t open = s.find(kOpen, pos);
        if (open == std::string_view::npos) {
            break;
        }
        const std::size_t close = s.find(kClose, open + kOpen.size());
        if (close == std::string_view::npos) {
            break;
        }
        names.emplace_back(text::trim(s.substr(open + kOpen.size(), close - open - kOpen.size())));
        pos = close + kClose.size();
    }
    return names;
}

TemplateSet TemplateSet::builtin() {
    TemplateSet set;
    for (auto& d : detail::default_templates()) {
        PromptTemplate tmpl{d.role, std::move(d.system), std::move(d.user),
                            required_placeholders(d.role), optional_placeholders(d.role)};
        check_template(tmpl);
        set.templates_.emplace(d.role, std::move(tmpl));
    }
    return set;
}

PromptTemplate TemplateSet::parse(AgentRole role, std::string_view file_text) {
    enum class Section { Preamble, System, User };
    Section section = Section::Preamble;
    std::string system;
    std::string user;
    bool saw_system = false;
    bool saw_user = false;

    for (std::string_view line : text::lines(file_text)) {
        const std::string_view marker = text::trim(line);
        if (marker == "[system]") {
            if (saw_system) {
                throw TemplateError("duplicate [system] section");
            }
            section = Section::System;
            saw_system = true;
            continue;
        }
        if (marker == "[user]") {
            if (saw_user) {
                throw TemplateError("duplicate [user] section");
            }
            section = Section::User;
            saw_user = true;
            continue;
        }
        switch (section) {
        case Section::Preamble:
            if (!marker.empty() && marker.front() != '#') {
                throw TemplateError("text before the [system] section in template '" +
                                    std::string(to_string(role)) + "'");
            }
            break;
        case Section::System:
            system.append(line).push_back('\n');
            break;
        case Section::User:
            user.append(line).push_back('\n');
            break;
        }
    }
    if (!saw_system || !saw_user) {
        throw TemplateError("template '" + std::string(to_string(role)) +
                            "' needs [system] and [user] sections");
    }

    PromptTemplate tmpl{role, std::string(trim_trailing(system)), std::string(trim_trailing(user)),
                        required_placeholders(role), optional_placeholders(role)};
    check_template(tmpl);
    return tmpl;
}

std::string TemplateSet::serialize(const PromptTemplate& tmpl) {
    std::ostringstream os;
    os << "# ttvr prompt template: " << to_string(tmpl.role) << "\n";
    os << "# Placeholders are written {{name}}. Required:";
    for (const auto& name : tmpl.required_placeholders) {
        os << ' ' << name;
    }
    os << ". Optional:";
    for (const auto& name : tmpl.optional_placeholders) {
        os << ' ' << name;
    }
    if (tmpl.optional_placeholders.empty()) {
        os << " none";
    }
    os << ".\n[system]\n" << tmpl.system_template << "\n[user]\n" << tmpl.user_template << "\n";
    return os.str();
}

TemplateSet TemplateSet::load_directory(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw TemplateError("template directory not found: " + dir.string());
    }
    TemplateSet set = builtin();
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") {
            continue;
        }
        AgentRole role{};
        try {
            role = parse_role(entry.path().stem().string());
        } catch (const std::invalid_argument&) {
            throw TemplateError("template file for unknown role: " + entry.path().string());
        }
        std::ifstream in(entry.path());
        std::stringstream buffer;
        buffer << in.rdbuf();
        try {
            set.templates_[role] = parse(role, buffer.str());
        } catch (const TemplateError& e) {
            throw TemplateError(entry.path().string() + ": " + e.what());
        }
    }
    return set;
}

void TemplateSet::write_directory(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    for (const auto& [role, tmpl] : templates_) {
        std::ofstream out(dir / (std::string(to_string(role)) + ".txt"));
        if (!out) {
            throw TemplateError("cannot write template into " + dir.string());
        }
        out << serialize(tmpl);
    }
}

const PromptTemplate& TemplateSet::get(AgentRole role) const {
    auto it = templates_.find(role);
    if (it == templates_.end()) {
        throw TemplateError("no template for role '" + std::string(to_string(role)) + "'");
    }
    return it->second;
}

void TemplateSet::set(PromptTemplate tmpl) {
    tmpl.required_placeholders = required_placeholders(tmpl.role);
    tmpl.optional_placeholders = optional_placeholders(tmpl.role);
    check_template(tmpl);
    templates_[tmpl.role] = std::move(tmpl);
}

RenderedPrompts TemplateSet::render(AgentRole role, const Bindings& bindings) const {
    const auto& tmpl = get(role);
    for (const auto& name : tmpl.required_placeholders) {
        if (bindings.find(name) == bindings.end()) {
            throw RenderError(name, "missing binding for placeholder '" + name +
                                        "' in template '" + std::string(to_string(role)) + "'");
        }
    }
    return {substitute(tmpl.system_template, tmpl, bindings),
            substitute(tmpl.user_template, tmpl, bindings)};
}

std::map<std::string, std::string> TemplateSet::snapshot() const {
    std::map<std::string, std::string> out;
    for (const auto& [role, tmpl] : templates_) {
        out.emplace(std::string(to_string(role)), serialize(tmpl));
    }
    return out;
}

RenderedPrompts render_prompts(AgentRole role, const Bindings& bindings) {
    static const TemplateSet defaults = TemplateSet::builtin();
    return defaults.render(role, bindings);
}

} // namespace ttvr::agents
