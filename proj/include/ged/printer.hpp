#pragma once

#include <string>

#include "ged/ast.hpp"

namespace ged {

// Canonical .ged text for a spec; parse(print(spec)) is structurally equal
// to spec for any spec that passes the parser's semantic checks.
std::string print(const DesignSpec& spec);

}  // namespace ged
