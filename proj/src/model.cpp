#include "ged/model.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace ged {

const char* role_name(Role r) {
  switch (r) {
    case Role::Treatment: return "treatment";
    case Role::Unit: return "unit";
    case Role::Record: return "record";
  }
  return "?";
}

const char* implicit_role_name(ImplicitRole r) {
  switch (r) {
    case ImplicitRole::ExperimentalUnit: return "experimental unit";
    case ImplicitRole::ObservationalUnit: return "observational unit";
    case ImplicitRole::NestedUnit: return "nested unit";
  }
  return "?";
}

const char* factor_edge_kind_name(FactorEdgeKind k) {
  switch (k) {
    case FactorEdgeKind::NestedIn: return "nested_in";
    case FactorEdgeKind::AllottedTo: return "allotted_to";
    case FactorEdgeKind::MeasuredOn: return "measured_on";
  }
  return "?";
}

const char* order_name(Order o) { return o == Order::Random ? "random" : "systematic"; }

// ---------------------------------------------------------------------------
// FactorGraph
// ---------------------------------------------------------------------------

FactorId FactorGraph::add_factor(std::string name, Role role) {
  const FactorId id{nodes_.size()};
  nodes_.push_back(Factor{id, std::move(name), role});
  return id;
}

void FactorGraph::add_edge(FactorId from, FactorId to, FactorEdgeKind kind) {
  edges_.push_back(FactorEdge{from, to, kind});
}

const Factor& FactorGraph::factor(FactorId id) const {
  if (!valid_id(id)) throw DesignError("unknown factor id");
  return nodes_[id.value];
}

std::optional<FactorId> FactorGraph::find(std::string_view name) const {
  for (const Factor& f : nodes_) {
    if (f.name == name) return f.id;
  }
  return std::nullopt;
}

std::optional<FactorId> FactorGraph::nesting_parent(FactorId unit) const {
  for (const FactorEdge& e : edges_) {
    if (e.kind == FactorEdgeKind::NestedIn && e.from == unit) return e.to;
  }
  return std::nullopt;
}

std::vector<FactorId> FactorGraph::nesting_children(FactorId unit) const {
  std::vector<FactorId> out;
  for (const FactorEdge& e : edges_) {
    if (e.kind == FactorEdgeKind::NestedIn && e.to == unit) out.push_back(e.from);
  }
  return out;
}

// ---------------------------------------------------------------------------
// LevelGraph
// ---------------------------------------------------------------------------

LevelId LevelGraph::add_level(FactorId factor, std::string label) {
  const LevelId id{nodes_.size()};
  if (by_factor_.size() <= factor.value) by_factor_.resize(factor.value + 1);
  const int ordinal = static_cast<int>(by_factor_[factor.value].size()) + 1;
  nodes_.push_back(Level{id, factor, std::move(label), ordinal});
  by_factor_[factor.value].push_back(id);
  out_.resize(nodes_.size());
  return id;
}

void LevelGraph::add_edge(LevelId from, LevelId to) {
  edges_.push_back(LevelEdge{from, to});
  if (out_.size() < nodes_.size()) out_.resize(nodes_.size());
  if (from.value < out_.size()) out_[from.value].push_back(to);
}

const Level& LevelGraph::level(LevelId id) const {
  if (!valid_id(id)) throw DesignError("unknown level id");
  return nodes_[id.value];
}

std::size_t LevelGraph::count_for(FactorId factor) const {
  return factor.value < by_factor_.size() ? by_factor_[factor.value].size() : 0;
}

const std::vector<LevelId>& LevelGraph::levels_of(FactorId factor) const {
  static const std::vector<LevelId> kEmpty;
  return factor.value < by_factor_.size() ? by_factor_[factor.value] : kEmpty;
}

const std::vector<LevelId>& LevelGraph::targets_of(LevelId from) const {
  static const std::vector<LevelId> kEmpty;
  return from.value < out_.size() ? out_[from.value] : kEmpty;
}

std::optional<LevelId> LevelGraph::edge_target(LevelId from, FactorId to_factor) const {
  std::optional<LevelId> found;
  for (const LevelId to : targets_of(from)) {
    if (nodes_[to.value].factor == to_factor) {
      if (found) return std::nullopt;  // ambiguous
      found = to;
    }
  }
  return found;
}

void LevelGraph::rebuild_out() {
  out_.assign(nodes_.size(), {});
  for (const LevelEdge& e : edges_) {
    if (e.from.value < out_.size()) out_[e.from.value].push_back(e.to);
  }
}

// ---------------------------------------------------------------------------
// Design helpers
// ---------------------------------------------------------------------------

Design new_design(std::optional<std::string> title) {
  Design d;
  d.title = std::move(title);
  return d;
}

const Factor& Design::require_factor(std::string_view name, Role role) const {
  const auto id = factor_graph.find(name);
  if (!id) {
    throw DesignError("unknown " + std::string(role_name(role)) + " '" + std::string(name) + "'");
  }
  const Factor& f = factor_graph.factor(*id);
  if (f.role != role) {
    throw DesignError("'" + std::string(name) + "' is a " + role_name(f.role) + ", not a " +
                      role_name(role));
  }
  return f;
}

std::set<ImplicitRole> implicit_roles(const Design& design, FactorId factor) {
  if (!design.factor_graph.valid_id(factor)) throw DesignError("unknown factor id");
  const Factor& f = design.factor_graph.factor(factor);
  if (f.role != Role::Unit) {
    throw DesignError("'" + f.name + "' is a " + role_name(f.role) +
                      "; implicit roles apply to units");
  }
  std::set<ImplicitRole> tags;
  for (const FactorEdge& e : design.factor_graph.edges()) {
    if (e.to == factor && e.kind == FactorEdgeKind::AllottedTo) {
      tags.insert(ImplicitRole::ExperimentalUnit);
    }
    if (e.to == factor && e.kind == FactorEdgeKind::MeasuredOn) {
      tags.insert(ImplicitRole::ObservationalUnit);
    }
    if (e.from == factor && e.kind == FactorEdgeKind::NestedIn) {
      tags.insert(ImplicitRole::NestedUnit);
    }
  }
  return tags;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

namespace {

// Iterative three-color DFS; graphs can be deep enough that recursion is out.
template <typename Adjacency>
bool has_cycle(std::size_t node_count, const Adjacency& adjacent, std::size_t* offender) {
  enum : unsigned char { White, Grey, Black };
  std::vector<unsigned char> color(node_count, White);
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // node, next child index
  for (std::size_t start = 0; start < node_count; ++start) {
    if (color[start] != White) continue;
    stack.emplace_back(start, 0);
    color[start] = Grey;
    while (!stack.empty()) {
      auto& [node, child] = stack.back();
      const auto& next = adjacent(node);
      if (child < next.size()) {
        const std::size_t to = next[child++];
        if (color[to] == Grey) {
          if (offender) *offender = to;
          return true;
        }
        if (color[to] == White) {
          color[to] = Grey;
          stack.emplace_back(to, 0);
        }
      } else {
        color[node] = Black;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace

std::vector<Violation> validate(const Design& design) {
  std::vector<Violation> out;
  const FactorGraph& fg = design.factor_graph;
  const LevelGraph& lg = design.level_graph;
  const std::size_t nf = fg.nodes().size();
  const std::size_t nl = lg.nodes().size();

  auto flag = [&](const char* rule, std::string subject, std::string message) {
    out.push_back(Violation{rule, std::move(subject), std::move(message)});
  };

  // Factor name uniqueness.
  std::unordered_set<std::string_view> names;
  for (const Factor& f : fg.nodes()) {
    if (!names.insert(f.name).second) {
      flag("duplicate-name", f.name, "factor name '" + f.name + "' is declared twice");
    }
  }

  // Level ownership: valid factor, unique (factor, ordinal), unique labels.
  std::vector<std::unordered_set<int>> ordinals(nf);
  std::vector<std::unordered_set<std::string_view>> labels(nf);
  for (const Level& l : lg.nodes()) {
    if (!fg.valid_id(l.factor)) {
      flag("level-ownership", l.label, "level '" + l.label + "' belongs to no factor");
      continue;
    }
    if (l.ordinal < 1 || !ordinals[l.factor.value].insert(l.ordinal).second) {
      flag("level-ownership", l.label,
           "level '" + l.label + "' repeats ordinal " + std::to_string(l.ordinal));
    }
    if (!labels[l.factor.value].insert(l.label).second) {
      flag("duplicate-label", l.label,
           "label '" + l.label + "' repeats within '" + fg.factor(l.factor).name + "'");
    }
  }

  // Level counts: zero levels only for records, records own none.
  for (const Factor& f : fg.nodes()) {
    const std::size_t n = lg.count_for(f.id);
    if (f.role == Role::Record && n != 0) {
      flag("level-count", f.name, "record '" + f.name + "' owns levels");
    }
    if (f.role != Role::Record && n == 0) {
      flag("level-count", f.name,
           std::string(role_name(f.role)) + " '" + f.name + "' has no levels");
    }
  }

  // Role pairing and nesting forest.
  std::vector<int> nesting_parents(nf, 0);
  for (const FactorEdge& e : fg.edges()) {
    if (!fg.valid_id(e.from) || !fg.valid_id(e.to)) {
      flag("role-pairing", "?", "factor edge endpoint does not exist");
      continue;
    }
    const Role from = fg.factor(e.from).role;
    const Role to = fg.factor(e.to).role;
    const char* edge_name = factor_edge_kind_name(e.kind);
    const std::string subject = fg.factor(e.from).name + " -> " + fg.factor(e.to).name;
    const Role want_from = e.kind == FactorEdgeKind::NestedIn    ? Role::Unit
                           : e.kind == FactorEdgeKind::AllottedTo ? Role::Treatment
                                                                  : Role::Record;
    if (from != want_from || to != Role::Unit) {
      flag("role-pairing", subject,
           std::string(edge_name) + " edge requires " + role_name(want_from) + " -> unit, got " +
               role_name(from) + " -> " + role_name(to));
    }
    if (e.kind == FactorEdgeKind::NestedIn && from == Role::Unit) {
      if (++nesting_parents[e.from.value] == 2) {
        flag("nesting-forest", fg.factor(e.from).name,
             "unit '" + fg.factor(e.from).name + "' has more than one nesting parent");
      }
    }
  }

  // Acyclicity of the factor graph.
  {
    std::vector<std::vector<std::size_t>> adj(nf);
    for (const FactorEdge& e : fg.edges()) {
      if (fg.valid_id(e.from) && fg.valid_id(e.to)) adj[e.from.value].push_back(e.to.value);
    }
    std::size_t offender = 0;
    if (has_cycle(nf, [&](std::size_t n) -> const std::vector<std::size_t>& { return adj[n]; },
                  &offender)) {
      flag("cycle", fg.factor(FactorId{offender}).name, "factor graph contains a cycle");
    }
  }

  // Level edges: endpoints exist and mirror some factor edge.
  for (const LevelEdge& e : lg.edges()) {
    if (!lg.valid_id(e.from) || !lg.valid_id(e.to)) {
      flag("edge-consistency", "?", "level edge endpoint does not exist");
      continue;
    }
    const FactorId from_f = lg.level(e.from).factor;
    const FactorId to_f = lg.level(e.to).factor;
    const bool mirrored = std::any_of(
        fg.edges().begin(), fg.edges().end(),
        [&](const FactorEdge& fe) { return fe.from == from_f && fe.to == to_f; });
    if (!mirrored) {
      flag("edge-consistency", lg.level(e.from).label + " -> " + lg.level(e.to).label,
           "level edge has no matching factor edge");
    }
  }

  // Acyclicity of the level graph.
  {
    std::vector<std::vector<std::size_t>> adj(nl);
    for (const LevelEdge& e : lg.edges()) {
      if (lg.valid_id(e.from) && lg.valid_id(e.to)) adj[e.from.value].push_back(e.to.value);
    }
    std::size_t offender = 0;
    if (has_cycle(nl, [&](std::size_t n) -> const std::vector<std::size_t>& { return adj[n]; },
                  &offender)) {
      flag("cycle", lg.level(LevelId{offender}).label, "level graph contains a cycle");
    }
  }

  // Nesting coverage: every child level hangs off exactly one parent level.
  for (const FactorEdge& e : fg.edges()) {
    if (e.kind != FactorEdgeKind::NestedIn) continue;
    if (!fg.valid_id(e.from) || !fg.valid_id(e.to)) continue;
    for (const LevelId child : lg.levels_of(e.from)) {
      std::size_t parents = 0;
      for (const LevelId to : lg.targets_of(child)) {
        if (lg.level(to).factor == e.to) ++parents;
      }
      if (parents != 1) {
        flag("level-coverage", lg.level(child).label,
             "level '" + lg.level(child).label + "' has " + std::to_string(parents) +
                 " edges into '" + fg.factor(e.to).name + "', expected exactly 1");
      }
    }
  }

  // Allotments: valid references, correct roles, no reused source.
  std::unordered_set<std::size_t> used_sources;
  for (const Allotment& a : design.allotments) {
    if (!fg.valid_id(a.target) || fg.factor(a.target).role != Role::Unit) {
      flag("allotment", "?", "allotment target is not a unit");
      continue;
    }
    if (a.sources.empty()) {
      flag("allotment", fg.factor(a.target).name, "allotment has no sources");
    }
    for (const FactorId s : a.sources) {
      if (!fg.valid_id(s) || fg.factor(s).role != Role::Treatment) {
        flag("allotment", fg.factor(a.target).name, "allotment source is not a treatment");
        continue;
      }
      if (!used_sources.insert(s.value).second) {
        flag("allotment", fg.factor(s).name,
             "treatment '" + fg.factor(s).name + "' appears in two allotments");
      }
    }
  }

  // No treatment-level edges may exist before assignment has run.
  if (!design.assignment.has_value()) {
    for (const LevelEdge& e : lg.edges()) {
      if (lg.valid_id(e.from) && fg.valid_id(lg.level(e.from).factor) &&
          fg.factor(lg.level(e.from).factor).role == Role::Treatment) {
        flag("assignment-state", lg.level(e.from).label,
             "treatment level edge present before assignment");
        break;
      }
    }
  }

  return out;
}

}  // namespace ged
