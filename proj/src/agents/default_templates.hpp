#pragma once

#include "ttvr/agents/roles.hpp"

#include <string>
#include <vector>

namespace ttvr::agents::detail {

struct DefaultTemplate {
    AgentRole role;
    std::string system;
    std::string user;
};

std::vector<DefaultTemplate> default_templates();

} // namespace ttvr::agents::detail
