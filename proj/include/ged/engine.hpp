#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ged/model.hpp"
#include "ged/rng.hpp"

namespace ged {

// One combined treatment level: one constituent level per source factor of
// an allotment, in source order.
using Combo = std::vector<LevelId>;

// Cartesian product of the sources' levels. The first-declared factor
// varies slowest: {f1,f2} x {a1,a2} -> (f1,a1),(f1,a2),(f2,a1),(f2,a2).
std::vector<Combo> cross_levels(const Design& design, const std::vector<FactorId>& sources);

// The target-unit levels sharing one nesting-parent level; random
// assignment balances within each group independently.
struct ConstraintGroup {
  std::optional<LevelId> key;    // parent level; nullopt = ROOT (unnested)
  std::vector<LevelId> members;  // ordinal order
};

// One group per nesting-parent level (parent ordinal order) when the target
// is nested, otherwise a single ROOT group holding every target level.
std::vector<ConstraintGroup> constraint_groups(const Design& design, FactorId target);

// Seeded balanced randomization within one group. With n members and t
// combos, every combo gets floor(n/t) replicates; the n mod t leftover
// slots go to distinct combos drawn uniformly without replacement. The
// replicate pool is then Fisher-Yates shuffled and zipped to the members in
// ordinal order. Draw order: leftover draw first, then the shuffle.
// Returns the combo index for each member, aligned with group.members.
std::vector<std::size_t> assign_random(const ConstraintGroup& group,
                                       const std::vector<Combo>& combos, Rng& rng);

// Cyclic assignment over the groups flattened in group order then member
// order: position p receives combo p mod t. Consumes no randomness.
std::vector<std::pair<LevelId, std::size_t>> assign_systematic(
    const std::vector<ConstraintGroup>& groups, const std::vector<Combo>& combos);

}  // namespace ged
