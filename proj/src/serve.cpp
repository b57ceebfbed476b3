#include "ged/table.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace ged {

namespace {

std::string with_unlinked(std::string message, const std::vector<std::string>& unlinked) {
  if (unlinked.empty()) return message;
  message += "; cannot link: ";
  const std::size_t shown = std::min<std::size_t>(unlinked.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) message += ", ";
    message += unlinked[i];
  }
  if (unlinked.size() > shown) {
    message += ", ... (" + std::to_string(unlinked.size() - shown) + " more)";
  }
  return message;
}

}  // namespace

UnservableError::UnservableError(const std::string& message, std::vector<std::string> unlinked)
    : std::runtime_error(with_unlinked(message, unlinked)), unlinked_(std::move(unlinked)) {}

DesignTable serve_table(const Design& design) {
  const FactorGraph& fg = design.factor_graph;
  const LevelGraph& lg = design.level_graph;

  // A structurally broken design never serves.
  if (const auto violations = validate(design); !violations.empty()) {
    std::string msg = "design is invalid:";
    for (std::size_t i = 0; i < std::min<std::size_t>(violations.size(), 3); ++i) {
      msg += " [" + violations[i].rule + "] " + violations[i].message + ";";
    }
    if (violations.size() > 3) msg += " ...";
    throw DesignError(msg);
  }

  std::vector<FactorId> units;
  for (const Factor& f : fg.nodes()) {
    if (f.role == Role::Unit) units.push_back(f.id);
  }
  if (units.empty()) {
    throw UnservableError("design has no unit factors; nothing can form a row", {});
  }

  // The serving unit is the unique leaf of the nesting forest. Anything
  // else (parallel leaves, disconnected trees) leaves levels with no row.
  std::vector<FactorId> leaves;
  for (const FactorId u : units) {
    if (fg.nesting_children(u).empty()) leaves.push_back(u);
  }
  if (leaves.size() != 1) {
    std::string names;
    std::vector<std::string> unlinked;
    for (const FactorId leaf : leaves) {
      if (!names.empty()) names += ", ";
      names += fg.factor(leaf).name;
    }
    for (const FactorId u : units) {
      for (const LevelId l : lg.levels_of(u)) unlinked.push_back(lg.level(l).label);
    }
    throw UnservableError(
        "units do not form a single nesting chain (leaf units: " + names + ")", unlinked);
  }
  const FactorId serving = leaves.front();

  // Walk leaf -> root; a unique leaf in a forest implies a single chain, so
  // this covers every unit factor.
  std::vector<FactorId> chain{serving};
  while (const auto parent = fg.nesting_parent(chain.back())) chain.push_back(*parent);
  std::reverse(chain.begin(), chain.end());

  // Mark every unit level an actual row will touch; anything left over is
  // structurally present but unreachable (e.g. a parent level without
  // children).
  std::vector<bool> reachable(lg.nodes().size(), false);
  for (const LevelId row : lg.levels_of(serving)) {
    LevelId cursor = row;
    reachable[cursor.value] = true;
    for (std::size_t depth = chain.size() - 1; depth > 0; --depth) {
      const auto up = lg.edge_target(cursor, chain[depth - 1]);
      if (!up) {
        throw UnservableError("level '" + lg.level(cursor).label + "' has no parent level",
                              {lg.level(cursor).label});
      }
      cursor = *up;
      reachable[cursor.value] = true;
    }
  }
  std::vector<std::string> unreachable;
  for (const FactorId u : chain) {
    for (const LevelId l : lg.levels_of(u)) {
      if (!reachable[l.value]) unreachable.push_back(lg.level(l).label);
    }
  }
  if (!unreachable.empty()) {
    throw UnservableError("some unit levels are unreachable from the serving unit", unreachable);
  }

  // Treatments: each must belong to an allotment, and each allotment must
  // have been assigned, or its levels cannot be linked to rows.
  std::vector<FactorId> treatments;
  std::unordered_map<std::size_t, std::size_t> allotment_of;  // factor -> allotment index
  for (const Factor& f : fg.nodes()) {
    if (f.role == Role::Treatment) treatments.push_back(f.id);
  }
  for (std::size_t i = 0; i < design.allotments.size(); ++i) {
    for (const FactorId s : design.allotments[i].sources) allotment_of.emplace(s.value, i);
  }
  for (const FactorId t : treatments) {
    if (!allotment_of.count(t.value)) {
      std::vector<std::string> unlinked;
      for (const LevelId l : lg.levels_of(t)) unlinked.push_back(lg.level(l).label);
      throw UnservableError(
          "treatment '" + fg.factor(t).name + "' is never allotted to a unit", unlinked);
    }
  }

  // Assigned treatment level per (treatment factor, target unit level).
  std::unordered_map<std::size_t, std::unordered_map<std::size_t, LevelId>> assigned;
  for (const LevelEdge& e : lg.edges()) {
    const FactorId from_factor = lg.level(e.from).factor;
    if (fg.factor(from_factor).role != Role::Treatment) continue;
    auto [it, fresh] = assigned[from_factor.value].emplace(e.to.value, e.from);
    if (!fresh) {
      throw UnservableError("level '" + lg.level(e.to).label +
                                "' holds more than one assignment of '" +
                                fg.factor(from_factor).name + "'",
                            {lg.level(e.to).label});
    }
  }
  for (std::size_t i = 0; i < design.allotments.size(); ++i) {
    const Allotment& allotment = design.allotments[i];
    std::vector<std::string> missing;
    for (const FactorId s : allotment.sources) {
      const auto it = assigned.find(s.value);
      const std::size_t have = it == assigned.end() ? 0 : it->second.size();
      if (have == 0) {
        for (const LevelId l : lg.levels_of(s)) missing.push_back(lg.level(l).label);
      } else {
        for (const LevelId target : lg.levels_of(allotment.target)) {
          if (!it->second.count(target.value)) missing.push_back(lg.level(target).label);
        }
      }
    }
    if (!missing.empty()) {
      throw UnservableError("allotment targeting '" + fg.factor(allotment.target).name +
                                "' has not been (fully) assigned; run assign_trts",
                            missing);
    }
  }

  // Columns: units root -> leaf, then treatments, then records, both in
  // declaration order.
  DesignTable table;
  table.title = design.title;
  std::unordered_map<std::size_t, std::size_t> chain_pos;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    chain_pos.emplace(chain[i].value, i);
    table.columns.push_back(Column{fg.factor(chain[i]).name, Role::Unit,
                                   implicit_roles(design, chain[i])});
  }
  for (const FactorId t : treatments) {
    table.columns.push_back(Column{fg.factor(t).name, Role::Treatment, {}});
  }
  std::vector<FactorId> records;
  for (const Factor& f : fg.nodes()) {
    if (f.role == Role::Record) {
      records.push_back(f.id);
      table.columns.push_back(Column{f.name, Role::Record, {}});
    }
  }

  // One row per serving-unit level, in ordinal order.
  table.rows.reserve(lg.count_for(serving));
  for (const LevelId row_level : lg.levels_of(serving)) {
    std::vector<LevelId> ancestors(chain.size());  // aligned with chain
    ancestors[chain.size() - 1] = row_level;
    for (std::size_t depth = chain.size() - 1; depth > 0; --depth) {
      ancestors[depth - 1] = *lg.edge_target(ancestors[depth], chain[depth - 1]);
    }

    std::vector<std::string> row;
    row.reserve(table.columns.size());
    for (const LevelId a : ancestors) row.push_back(lg.level(a).label);
    for (const FactorId t : treatments) {
      const FactorId target = design.allotments[allotment_of.at(t.value)].target;
      const LevelId target_level = ancestors[chain_pos.at(target.value)];
      row.push_back(lg.level(assigned.at(t.value).at(target_level.value)).label);
    }
    for (std::size_t r = 0; r < records.size(); ++r) row.emplace_back();
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace ged
