#pragma once

#include <string>

namespace yardcast {

/// The three modelled container groups plus a catch-all for codes the
/// classification table does not recognize (tracked, never modelled).
enum class ContainerCategory { Standard, Special, Reefer, Unknown };

std::string to_string(ContainerCategory c);
ContainerCategory category_from_string(const std::string& s);

}  // namespace yardcast
