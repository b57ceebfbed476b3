#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ged/decl.hpp"

namespace ged {

// Explicit role carried by every factor. Treatments are under full control
// of the experimenter, units under partial control, records not at all.
enum class Role { Treatment, Unit, Record };

const char* role_name(Role r);

// Roles inferred from the factor graph rather than declared. A unit can
// carry several at once.
enum class ImplicitRole { ExperimentalUnit, ObservationalUnit, NestedUnit };

const char* implicit_role_name(ImplicitRole r);

struct FactorId {
  std::size_t value = 0;
  auto operator<=>(const FactorId&) const = default;
};

struct LevelId {
  std::size_t value = 0;
  auto operator<=>(const LevelId&) const = default;
};

struct Factor {
  FactorId id;
  std::string name;
  Role role = Role::Unit;
};

struct Level {
  LevelId id;
  FactorId factor;
  std::string label;
  int ordinal = 0;  // 1-based within its factor
};

// Factor edges are stored dependent -> target: plot -> patch (NestedIn),
// fertilizer -> plot (AllottedTo), yield -> plot (MeasuredOn).
enum class FactorEdgeKind { NestedIn, AllottedTo, MeasuredOn };

const char* factor_edge_kind_name(FactorEdgeKind k);

struct FactorEdge {
  FactorId from;
  FactorId to;
  FactorEdgeKind kind = FactorEdgeKind::NestedIn;
};

// The high-level DAG: nodes are factors, edges their relationships.
class FactorGraph {
 public:
  FactorId add_factor(std::string name, Role role);
  void add_edge(FactorId from, FactorId to, FactorEdgeKind kind);

  const std::vector<Factor>& nodes() const { return nodes_; }
  const std::vector<FactorEdge>& edges() const { return edges_; }
  std::vector<FactorEdge>& edges() { return edges_; }

  bool valid_id(FactorId id) const { return id.value < nodes_.size(); }
  const Factor& factor(FactorId id) const;
  std::optional<FactorId> find(std::string_view name) const;

  // The unique NestedIn target of a unit, when one exists.
  std::optional<FactorId> nesting_parent(FactorId unit) const;
  // Units nested directly inside `unit`.
  std::vector<FactorId> nesting_children(FactorId unit) const;

 private:
  std::vector<Factor> nodes_;  // index == FactorId::value
  std::vector<FactorEdge> edges_;
};

struct LevelEdge {
  LevelId from;
  LevelId to;
};

// The low-level DAG: nodes are individual levels, edges link a level to the
// level it depends on (child unit level -> parent unit level, treatment
// level -> unit level it was assigned to).
class LevelGraph {
 public:
  LevelId add_level(FactorId factor, std::string label);
  void add_edge(LevelId from, LevelId to);
  // Drops every edge whose origin level satisfies `pred`.
  template <typename Pred>
  void remove_edges_from(Pred pred);

  const std::vector<Level>& nodes() const { return nodes_; }
  const std::vector<LevelEdge>& edges() const { return edges_; }

  bool valid_id(LevelId id) const { return id.value < nodes_.size(); }
  const Level& level(LevelId id) const;
  std::size_t count_for(FactorId factor) const;
  // Levels of one factor in ordinal order.
  const std::vector<LevelId>& levels_of(FactorId factor) const;
  const std::vector<LevelId>& targets_of(LevelId from) const;
  // The unique edge target among levels of `to_factor`, when exactly one exists.
  std::optional<LevelId> edge_target(LevelId from, FactorId to_factor) const;

 private:
  void rebuild_out();

  std::vector<Level> nodes_;  // index == LevelId::value
  std::vector<LevelEdge> edges_;
  std::vector<std::vector<LevelId>> by_factor_;
  std::vector<std::vector<LevelId>> out_;  // kept in sync; const reads race-free
};

// A treatment crossing allotted to a unit factor.
struct Allotment {
  std::vector<FactorId> sources;  // role Treatment; >1 means crossed
  FactorId target;                // role Unit
};

struct AssignmentSpec {
  std::vector<Order> orders;  // one per allotment, or one applied to all
  std::uint64_t seed = 0;
};

// Raised by engine verbs on precondition violations (unknown names, role
// mismatches, bad counts). Parse-level twins of these checks report
// positions; this is the programmatic-API error path.
class DesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The mutable working object the grammar verbs build up.
class Design {
 public:
  std::optional<std::string> title;
  FactorGraph factor_graph;
  LevelGraph level_graph;
  std::vector<Allotment> allotments;
  std::optional<AssignmentSpec> assignment;
  std::optional<std::uint64_t> seed;  // effective seed once assignment ran

  // Grammar verbs; defined in engine.cpp. Each returns *this for chaining.
  Design& set_units(const std::vector<UnitDecl>& decls);
  Design& set_trts(const std::vector<TrtDecl>& decls);
  Design& set_rcrds(const std::vector<RcrdDecl>& decls);
  Design& allot_trts(const std::vector<AllotDecl>& decls);
  Design& assign_trts(const AssignmentSpec& spec);

  const Factor& require_factor(std::string_view name, Role role) const;
};

Design new_design(std::optional<std::string> title = std::nullopt);

// Tags inferred from the factor graph for one unit factor. Pure in the
// graph: identical input graph, identical tags.
std::set<ImplicitRole> implicit_roles(const Design& design, FactorId factor);

struct Violation {
  std::string rule;     // "cycle", "role-pairing", "nesting-forest", ...
  std::string subject;  // offending factor/level/edge
  std::string message;
};

// Structural audit of a design. Violations are data, not failures: an empty
// list means every model invariant holds.
std::vector<Violation> validate(const Design& design);

// Hard ceiling on levels per design; guards table/graph materialization.
inline constexpr std::size_t kMaxLevels = 1'000'000;

template <typename Pred>
void LevelGraph::remove_edges_from(Pred pred) {
  std::erase_if(edges_, [&](const LevelEdge& e) { return pred(e.from); });
  rebuild_out();
}

}  // namespace ged
