#include "ged/ast.hpp"

#include <algorithm>

namespace ged {

namespace {

bool equal(const std::variant<CountSpec, LabelsSpec>& a,
           const std::variant<CountSpec, LabelsSpec>& b) {
  if (a.index() != b.index()) return false;
  if (const auto* c = std::get_if<CountSpec>(&a)) return c->n == std::get<CountSpec>(b).n;
  return std::get<LabelsSpec>(a).labels == std::get<LabelsSpec>(b).labels;
}

bool equal(const PerParentCount& a, const PerParentCount& b) {
  return a.parent == b.parent && a.count == b.count;
}

bool equal(const NestedSpec& a, const NestedSpec& b) {
  if (a.parent != b.parent) return false;
  if (a.counts.index() != b.counts.index()) return false;
  if (const auto* u = std::get_if<std::int64_t>(&a.counts)) {
    return *u == std::get<std::int64_t>(b.counts);
  }
  const auto& pa = std::get<std::vector<PerParentCount>>(a.counts);
  const auto& pb = std::get<std::vector<PerParentCount>>(b.counts);
  return std::equal(pa.begin(), pa.end(), pb.begin(), pb.end(),
                    [](const PerParentCount& x, const PerParentCount& y) { return equal(x, y); });
}

template <typename T>
bool all_equal(const std::vector<T>& a, const std::vector<T>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const T& x, const T& y) { return structurally_equal(x, y); });
}

}  // namespace

bool structurally_equal(const UnitDecl& a, const UnitDecl& b) {
  if (a.name != b.name || a.spec.index() != b.spec.index()) return false;
  if (const auto* c = std::get_if<CountSpec>(&a.spec)) {
    return c->n == std::get<CountSpec>(b.spec).n;
  }
  if (const auto* l = std::get_if<LabelsSpec>(&a.spec)) {
    return l->labels == std::get<LabelsSpec>(b.spec).labels;
  }
  return equal(std::get<NestedSpec>(a.spec), std::get<NestedSpec>(b.spec));
}

bool structurally_equal(const TrtDecl& a, const TrtDecl& b) {
  return a.name == b.name && equal(a.spec, b.spec);
}

bool structurally_equal(const RcrdDecl& a, const RcrdDecl& b) {
  return a.name == b.name && a.unit == b.unit;
}

bool structurally_equal(const AllotDecl& a, const AllotDecl& b) {
  return a.sources == b.sources && a.target == b.target;
}

bool structurally_equal(const AssignDecl& a, const AssignDecl& b) {
  return a.orders == b.orders && a.seed == b.seed;
}

bool structurally_equal(const DesignSpec& a, const DesignSpec& b) {
  if (a.title != b.title) return false;
  if (a.assign_decl.has_value() != b.assign_decl.has_value()) return false;
  if (a.assign_decl && !structurally_equal(*a.assign_decl, *b.assign_decl)) return false;
  return all_equal(a.unit_decls, b.unit_decls) && all_equal(a.trt_decls, b.trt_decls) &&
         all_equal(a.rcrd_decls, b.rcrd_decls) && all_equal(a.allot_decls, b.allot_decls);
}

}  // namespace ged
