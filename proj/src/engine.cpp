#include "ged/engine.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "ged/model.hpp"

namespace ged {

namespace {

void check_new_name(const Design& d, const std::string& name) {
  if (name.empty()) throw DesignError("factor name must not be empty");
  if (d.factor_graph.find(name)) throw DesignError("duplicate factor name '" + name + "'");
}

void check_capacity(const Design& d, std::size_t incoming) {
  if (d.level_graph.nodes().size() + incoming > kMaxLevels) {
    throw DesignError("design exceeds the maximum of " + std::to_string(kMaxLevels) + " levels");
  }
}

std::int64_t positive_count(std::int64_t n, const std::string& name) {
  if (n <= 0) {
    throw DesignError("count for '" + name + "' must be positive, got " + std::to_string(n));
  }
  // Bounding single counts here keeps later sums far from overflow.
  if (static_cast<std::size_t>(n) > kMaxLevels) {
    throw DesignError("design exceeds the maximum of " + std::to_string(kMaxLevels) + " levels");
  }
  return n;
}

void check_labels(const std::vector<std::string>& labels, const std::string& name) {
  if (labels.empty()) throw DesignError("label list for '" + name + "' is empty");
  std::set<std::string_view> seen;
  for (const std::string& l : labels) {
    if (!seen.insert(l).second) {
      throw DesignError("label '" + l + "' repeats within '" + name + "'");
    }
  }
}

// Creates levels labelled <name>1..<name>n (the global counter scheme).
void add_counted_levels(Design& d, FactorId f, const std::string& name, std::int64_t n) {
  check_capacity(d, static_cast<std::size_t>(n));
  for (std::int64_t k = 1; k <= n; ++k) {
    d.level_graph.add_level(f, name + std::to_string(k));
  }
}

// Per-parent counts aligned with the parent's levels in ordinal order.
std::vector<std::int64_t> resolve_per_parent(const Design& d, FactorId parent,
                                             const std::string& child_name,
                                             const std::vector<PerParentCount>& entries) {
  const auto& parent_levels = d.level_graph.levels_of(parent);
  const std::string& parent_name = d.factor_graph.factor(parent).name;
  std::vector<std::int64_t> counts(parent_levels.size(), 0);

  bool saw_ordinal = false;
  bool saw_label = false;
  std::unordered_map<std::string_view, std::size_t> by_label;
  for (std::size_t i = 0; i < parent_levels.size(); ++i) {
    by_label.emplace(d.level_graph.level(parent_levels[i]).label, i);
  }

  for (const PerParentCount& e : entries) {
    std::size_t index = 0;
    if (const auto* ordinal = std::get_if<std::int64_t>(&e.parent)) {
      saw_ordinal = true;
      if (*ordinal < 1 || static_cast<std::size_t>(*ordinal) > parent_levels.size()) {
        throw DesignError("'" + parent_name + "' has no level " + std::to_string(*ordinal));
      }
      index = static_cast<std::size_t>(*ordinal) - 1;
    } else {
      saw_label = true;
      const auto it = by_label.find(std::get<std::string>(e.parent));
      if (it == by_label.end()) {
        throw DesignError("'" + parent_name + "' has no level labelled '" +
                          std::get<std::string>(e.parent) + "'");
      }
      index = it->second;
    }
    if (saw_ordinal && saw_label) {
      throw DesignError("per-parent counts for '" + child_name +
                        "' mix ordinal and label keys");
    }
    if (counts[index] != 0) {
      throw DesignError("parent level of '" + child_name + "' is counted twice");
    }
    counts[index] = positive_count(e.count, child_name);
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) {
      throw DesignError("per-parent counts for '" + child_name + "' miss level '" +
                        d.level_graph.level(parent_levels[i]).label + "'");
    }
  }
  return counts;
}

}  // namespace

// ---------------------------------------------------------------------------
// Verbs
// ---------------------------------------------------------------------------

Design& Design::set_units(const std::vector<UnitDecl>& decls) {
  for (const UnitDecl& decl : decls) {
    check_new_name(*this, decl.name);

    if (const auto* count = std::get_if<CountSpec>(&decl.spec)) {
      positive_count(count->n, decl.name);
      check_capacity(*this, static_cast<std::size_t>(count->n));
      const FactorId f = factor_graph.add_factor(decl.name, Role::Unit);
      add_counted_levels(*this, f, decl.name, count->n);
    } else if (const auto* labels = std::get_if<LabelsSpec>(&decl.spec)) {
      check_labels(labels->labels, decl.name);
      check_capacity(*this, labels->labels.size());
      const FactorId f = factor_graph.add_factor(decl.name, Role::Unit);
      for (const std::string& label : labels->labels) level_graph.add_level(f, label);
    } else {
      const auto& nested = std::get<NestedSpec>(decl.spec);
      // Copy the id: adding the child factor invalidates factor references.
      const FactorId parent = require_factor(nested.parent, Role::Unit).id;

      std::vector<std::int64_t> per_parent;
      if (const auto* uniform = std::get_if<std::int64_t>(&nested.counts)) {
        positive_count(*uniform, decl.name);
        per_parent.assign(level_graph.count_for(parent), *uniform);
      } else {
        per_parent = resolve_per_parent(*this, parent, decl.name,
                                        std::get<std::vector<PerParentCount>>(nested.counts));
      }
      const std::int64_t total =
          std::accumulate(per_parent.begin(), per_parent.end(), std::int64_t{0});
      check_capacity(*this, static_cast<std::size_t>(total));

      const FactorId f = factor_graph.add_factor(decl.name, Role::Unit);
      factor_graph.add_edge(f, parent, FactorEdgeKind::NestedIn);
      std::int64_t counter = 0;
      const auto parent_levels = level_graph.levels_of(parent);
      for (std::size_t p = 0; p < parent_levels.size(); ++p) {
        for (std::int64_t k = 0; k < per_parent[p]; ++k) {
          const LevelId child = level_graph.add_level(f, decl.name + std::to_string(++counter));
          level_graph.add_edge(child, parent_levels[p]);
        }
      }
    }
  }
  return *this;
}

Design& Design::set_trts(const std::vector<TrtDecl>& decls) {
  for (const TrtDecl& decl : decls) {
    check_new_name(*this, decl.name);
    if (const auto* count = std::get_if<CountSpec>(&decl.spec)) {
      positive_count(count->n, decl.name);
      check_capacity(*this, static_cast<std::size_t>(count->n));
      const FactorId f = factor_graph.add_factor(decl.name, Role::Treatment);
      add_counted_levels(*this, f, decl.name, count->n);
    } else {
      const auto& labels = std::get<LabelsSpec>(decl.spec).labels;
      check_labels(labels, decl.name);
      check_capacity(*this, labels.size());
      const FactorId f = factor_graph.add_factor(decl.name, Role::Treatment);
      for (const std::string& label : labels) level_graph.add_level(f, label);
    }
  }
  return *this;
}

Design& Design::set_rcrds(const std::vector<RcrdDecl>& decls) {
  for (const RcrdDecl& decl : decls) {
    check_new_name(*this, decl.name);
    const FactorId unit = require_factor(decl.unit, Role::Unit).id;
    const FactorId f = factor_graph.add_factor(decl.name, Role::Record);
    factor_graph.add_edge(f, unit, FactorEdgeKind::MeasuredOn);
  }
  return *this;
}

Design& Design::allot_trts(const std::vector<AllotDecl>& decls) {
  for (const AllotDecl& decl : decls) {
    if (decl.sources.empty()) throw DesignError("allotment has no treatment factors");
    const FactorId target = require_factor(decl.target, Role::Unit).id;

    Allotment allotment;
    allotment.target = target;
    for (const std::string& source : decl.sources) {
      const FactorId trt = require_factor(source, Role::Treatment).id;
      const bool reused =
          std::any_of(allotments.begin(), allotments.end(), [&](const Allotment& a) {
            return std::find(a.sources.begin(), a.sources.end(), trt) != a.sources.end();
          }) ||
          std::find(allotment.sources.begin(), allotment.sources.end(), trt) !=
              allotment.sources.end();
      if (reused) {
        throw DesignError("treatment '" + source + "' is already allotted");
      }
      allotment.sources.push_back(trt);
    }
    for (const FactorId s : allotment.sources) {
      factor_graph.add_edge(s, target, FactorEdgeKind::AllottedTo);
    }
    allotments.push_back(std::move(allotment));
  }
  return *this;
}

Design& Design::assign_trts(const AssignmentSpec& spec) {
  if (allotments.empty()) throw DesignError("assign_trts requires at least one allotment");
  if (spec.orders.empty()) throw DesignError("assignment needs at least one order");
  if (spec.orders.size() != 1 && spec.orders.size() != allotments.size()) {
    throw DesignError("assignment declares " + std::to_string(spec.orders.size()) +
                      " orders for " + std::to_string(allotments.size()) + " allotments");
  }

  // Re-running replaces any previous assignment outright.
  level_graph.remove_edges_from([&](LevelId from) {
    return factor_graph.factor(level_graph.level(from).factor).role == Role::Treatment;
  });

  // One generator, consumed in allotment order then group order.
  Rng rng(spec.seed);
  for (std::size_t i = 0; i < allotments.size(); ++i) {
    const Allotment& allotment = allotments[i];
    const Order order = spec.orders.size() == 1 ? spec.orders.front() : spec.orders[i];
    const auto combos = cross_levels(*this, allotment.sources);
    const auto groups = constraint_groups(*this, allotment.target);

    if (order == Order::Random) {
      for (const ConstraintGroup& group : groups) {
        const auto picks = assign_random(group, combos, rng);
        for (std::size_t m = 0; m < group.members.size(); ++m) {
          for (const LevelId part : combos[picks[m]]) {
            level_graph.add_edge(part, group.members[m]);
          }
        }
      }
    } else {
      for (const auto& [unit_level, combo] : assign_systematic(groups, combos)) {
        for (const LevelId part : combos[combo]) level_graph.add_edge(part, unit_level);
      }
    }
  }

  assignment = spec;
  seed = spec.seed;
  return *this;
}

// ---------------------------------------------------------------------------
// Assignment building blocks
// ---------------------------------------------------------------------------

std::vector<Combo> cross_levels(const Design& design, const std::vector<FactorId>& sources) {
  if (sources.empty()) throw DesignError("cross_levels needs at least one factor");
  std::vector<Combo> combos{{}};
  for (const FactorId f : sources) {
    const auto& levels = design.level_graph.levels_of(f);
    if (levels.empty()) {
      throw DesignError("factor '" + design.factor_graph.factor(f).name + "' has no levels");
    }
    std::vector<Combo> expanded;
    expanded.reserve(combos.size() * levels.size());
    for (const Combo& head : combos) {
      for (const LevelId l : levels) {
        Combo next = head;
        next.push_back(l);
        expanded.push_back(std::move(next));
      }
    }
    combos = std::move(expanded);
  }
  return combos;
}

std::vector<ConstraintGroup> constraint_groups(const Design& design, FactorId target) {
  if (!design.factor_graph.valid_id(target)) throw DesignError("unknown factor id");
  const Factor& unit = design.factor_graph.factor(target);
  if (unit.role != Role::Unit) {
    throw DesignError("'" + unit.name + "' is not a unit");
  }

  const auto parent = design.factor_graph.nesting_parent(target);
  if (!parent) {
    ConstraintGroup root;
    root.members = design.level_graph.levels_of(target);
    return {root};
  }

  const auto& parent_levels = design.level_graph.levels_of(*parent);
  std::vector<ConstraintGroup> groups(parent_levels.size());
  std::unordered_map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < parent_levels.size(); ++i) {
    groups[i].key = parent_levels[i];
    slot.emplace(parent_levels[i].value, i);
  }
  for (const LevelId member : design.level_graph.levels_of(target)) {
    const auto up = design.level_graph.edge_target(member, *parent);
    if (!up) {
      throw DesignError("level '" + design.level_graph.level(member).label +
                        "' has no nesting parent level");
    }
    groups[slot.at(up->value)].members.push_back(member);
  }
  return groups;
}

std::vector<std::size_t> assign_random(const ConstraintGroup& group,
                                       const std::vector<Combo>& combos, Rng& rng) {
  const std::size_t n = group.members.size();
  const std::size_t t = combos.size();
  if (n == 0) throw DesignError("constraint group is empty");
  if (t == 0) throw DesignError("nothing to assign: no combinations");

  std::vector<std::size_t> counts(t, n / t);
  const std::size_t leftover = n % t;
  if (leftover > 0) {
    // Distinct recipients for the leftover slots, drawn without replacement.
    std::vector<std::size_t> order(t);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t k = 0; k < leftover; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng.bounded(t - k));
      std::swap(order[k], order[j]);
      ++counts[order[k]];
    }
  }

  std::vector<std::size_t> pool;
  pool.reserve(n);
  for (std::size_t c = 0; c < t; ++c) pool.insert(pool.end(), counts[c], c);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.bounded(i + 1));
    std::swap(pool[i], pool[j]);
  }
  return pool;
}

std::vector<std::pair<LevelId, std::size_t>> assign_systematic(
    const std::vector<ConstraintGroup>& groups, const std::vector<Combo>& combos) {
  if (combos.empty()) throw DesignError("nothing to assign: no combinations");
  std::vector<std::pair<LevelId, std::size_t>> out;
  std::size_t position = 0;
  for (const ConstraintGroup& group : groups) {
    for (const LevelId member : group.members) {
      out.emplace_back(member, position % combos.size());
      ++position;
    }
  }
  return out;
}

}  // namespace ged
