#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ged/model.hpp"

namespace ged {

struct Column {
  std::string name;
  Role role = Role::Unit;
  std::set<ImplicitRole> tags;
};

// The rectangular form of a design: one row per smallest unit, one column
// per factor. Record cells are empty (data-collection placeholders).
struct DesignTable {
  std::optional<std::string> title;
  std::vector<Column> columns;
  std::vector<std::vector<std::string>> rows;
};

// Raised when the level graph cannot be flattened into one row per smallest
// unit; lists every level that cannot be linked to a row.
class UnservableError : public std::runtime_error {
 public:
  UnservableError(const std::string& message, std::vector<std::string> unlinked);

  const std::vector<std::string>& unlinked_levels() const { return unlinked_; }

 private:
  std::vector<std::string> unlinked_;
};

// Flattens the graph form into the design table. The serving unit is the
// unique leaf of the unit-nesting chain; rows follow its level ordinals.
// Columns: units root->leaf, then treatments in declaration order (a row
// inherits treatments assigned to any ancestor unit), then records.
DesignTable serve_table(const Design& design);

}  // namespace ged
