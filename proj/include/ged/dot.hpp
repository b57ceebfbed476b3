#pragma once

#include <string>

#include "ged/model.hpp"

namespace ged {

// Graphviz DOT renderings of the two graphs. Node shape/color is keyed by
// role (legend in a leading comment); ordering is deterministic: factors in
// declaration order, levels in ordinal order, edges in insertion order.
std::string factor_graph_dot(const Design& design);
std::string level_graph_dot(const Design& design);

}  // namespace ged
