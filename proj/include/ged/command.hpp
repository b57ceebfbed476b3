#pragma once

#include <variant>
#include <vector>

#include "ged/ast.hpp"
#include "ged/model.hpp"

namespace ged {

// A spec lowers to a flat command list; replaying the list against an empty
// design rebuilds the same design deterministically.

struct NewDesignCmd {
  std::optional<std::string> title;
};
struct SetUnitsCmd {
  std::vector<UnitDecl> decls;
};
struct SetTrtsCmd {
  std::vector<TrtDecl> decls;
};
struct SetRcrdsCmd {
  std::vector<RcrdDecl> decls;
};
struct AllotTrtsCmd {
  std::vector<AllotDecl> decls;
};
struct AssignTrtsCmd {
  AssignmentSpec spec;
};

using Command =
    std::variant<NewDesignCmd, SetUnitsCmd, SetTrtsCmd, SetRcrdsCmd, AllotTrtsCmd, AssignTrtsCmd>;

const char* command_name(const Command& cmd);

// Command order: NewDesign, then one command per verb group in the fixed
// verb order (units, trts, rcrds, allot, assign); decls keep source order.
// Empty groups are omitted.
std::vector<Command> lower(const DesignSpec& spec);

Design replay(const std::vector<Command>& commands);

// lower + replay.
Design build(const DesignSpec& spec);

bool structurally_equal(const Command& a, const Command& b);
bool structurally_equal(const std::vector<Command>& a, const std::vector<Command>& b);

}  // namespace ged
