#include "ged/dot.hpp"

#include <sstream>

namespace ged {

namespace {

constexpr const char* kLegend =
    "// roles: treatment = box/lightgoldenrod1, unit = ellipse/lightblue,"
    " record = diamond/lightpink\n";

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

const char* shape_for(Role role) {
  switch (role) {
    case Role::Treatment: return "box";
    case Role::Unit: return "ellipse";
    case Role::Record: return "diamond";
  }
  return "ellipse";
}

const char* color_for(Role role) {
  switch (role) {
    case Role::Treatment: return "lightgoldenrod1";
    case Role::Unit: return "lightblue";
    case Role::Record: return "lightpink";
  }
  return "white";
}

void node_attrs(std::ostream& out, Role role) {
  out << "[shape=" << shape_for(role) << ", style=filled, fillcolor=" << color_for(role) << "]";
}

}  // namespace

std::string factor_graph_dot(const Design& design) {
  const FactorGraph& fg = design.factor_graph;
  std::ostringstream out;
  out << kLegend;
  out << "digraph factor_graph {\n";
  for (const Factor& f : fg.nodes()) {
    out << "  " << quoted(f.name) << " ";
    node_attrs(out, f.role);
    out << ";\n";
  }
  for (const FactorEdge& e : fg.edges()) {
    out << "  " << quoted(fg.factor(e.from).name) << " -> " << quoted(fg.factor(e.to).name)
        << " [label=" << quoted(factor_edge_kind_name(e.kind)) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string level_graph_dot(const Design& design) {
  const FactorGraph& fg = design.factor_graph;
  const LevelGraph& lg = design.level_graph;
  std::ostringstream out;
  out << kLegend;
  out << "// nodes are levels, grouped by factor in declaration order\n";
  out << "digraph level_graph {\n";
  for (const Factor& f : fg.nodes()) {
    for (const LevelId id : lg.levels_of(f.id)) {
      out << "  L" << id.value << " [label=" << quoted(lg.level(id).label) << ", shape="
          << shape_for(f.role) << ", style=filled, fillcolor=" << color_for(f.role) << "];\n";
    }
  }
  for (const LevelEdge& e : lg.edges()) {
    out << "  L" << e.from.value << " -> L" << e.to.value << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace ged
