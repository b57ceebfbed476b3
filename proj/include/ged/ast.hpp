#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ged/decl.hpp"

namespace ged {

// Parsed form of a .ged program. Declaration order is preserved within each
// list exactly as written; it drives systematic assignment and column order.
struct DesignSpec {
  std::optional<std::string> title;
  std::vector<UnitDecl> unit_decls;
  std::vector<TrtDecl> trt_decls;
  std::vector<RcrdDecl> rcrd_decls;
  std::vector<AllotDecl> allot_decls;
  std::optional<AssignDecl> assign_decl;
};

// Equality over semantic content, ignoring source positions (pretty-print
// then re-parse moves every token).
bool structurally_equal(const UnitDecl& a, const UnitDecl& b);
bool structurally_equal(const TrtDecl& a, const TrtDecl& b);
bool structurally_equal(const RcrdDecl& a, const RcrdDecl& b);
bool structurally_equal(const AllotDecl& a, const AllotDecl& b);
bool structurally_equal(const AssignDecl& a, const AssignDecl& b);
bool structurally_equal(const DesignSpec& a, const DesignSpec& b);

}  // namespace ged
