#pragma once

#include <string_view>

#include "ged/ast.hpp"
#include "ged/lexer.hpp"

namespace ged {

// Recursive-descent parser for .ged programs. Performs the semantic checks
// too (duplicate names, undeclared references, per-parent coverage, order
// list arity), so every error carries a source position. A returned
// DesignSpec is ready for lower()/build() without further checking.
ParseResult<DesignSpec> parse(std::string_view source);

}  // namespace ged
