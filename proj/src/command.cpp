#include "ged/command.hpp"

namespace ged {

const char* command_name(const Command& cmd) {
  return std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, NewDesignCmd>) return "new_design";
        if constexpr (std::is_same_v<T, SetUnitsCmd>) return "set_units";
        if constexpr (std::is_same_v<T, SetTrtsCmd>) return "set_trts";
        if constexpr (std::is_same_v<T, SetRcrdsCmd>) return "set_rcrds";
        if constexpr (std::is_same_v<T, AllotTrtsCmd>) return "allot_trts";
        if constexpr (std::is_same_v<T, AssignTrtsCmd>) return "assign_trts";
      },
      cmd);
}

std::vector<Command> lower(const DesignSpec& spec) {
  std::vector<Command> commands;
  commands.push_back(NewDesignCmd{spec.title});
  if (!spec.unit_decls.empty()) commands.push_back(SetUnitsCmd{spec.unit_decls});
  if (!spec.trt_decls.empty()) commands.push_back(SetTrtsCmd{spec.trt_decls});
  if (!spec.rcrd_decls.empty()) commands.push_back(SetRcrdsCmd{spec.rcrd_decls});
  if (!spec.allot_decls.empty()) commands.push_back(AllotTrtsCmd{spec.allot_decls});
  if (spec.assign_decl) {
    AssignmentSpec assignment;
    assignment.orders = spec.assign_decl->orders;
    assignment.seed = spec.assign_decl->seed.value_or(0);
    commands.push_back(AssignTrtsCmd{std::move(assignment)});
  }
  return commands;
}

Design replay(const std::vector<Command>& commands) {
  Design design;
  for (const Command& cmd : commands) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, NewDesignCmd>) {
            design = new_design(c.title);
          } else if constexpr (std::is_same_v<T, SetUnitsCmd>) {
            design.set_units(c.decls);
          } else if constexpr (std::is_same_v<T, SetTrtsCmd>) {
            design.set_trts(c.decls);
          } else if constexpr (std::is_same_v<T, SetRcrdsCmd>) {
            design.set_rcrds(c.decls);
          } else if constexpr (std::is_same_v<T, AllotTrtsCmd>) {
            design.allot_trts(c.decls);
          } else {
            design.assign_trts(c.spec);
          }
        },
        cmd);
  }
  return design;
}

Design build(const DesignSpec& spec) { return replay(lower(spec)); }

namespace {

template <typename T>
bool decl_lists_equal(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!structurally_equal(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

bool structurally_equal(const Command& a, const Command& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& ca) {
        using T = std::decay_t<decltype(ca)>;
        const auto& cb = std::get<T>(b);
        if constexpr (std::is_same_v<T, NewDesignCmd>) {
          return ca.title == cb.title;
        } else if constexpr (std::is_same_v<T, AssignTrtsCmd>) {
          return ca.spec.orders == cb.spec.orders && ca.spec.seed == cb.spec.seed;
        } else {
          return decl_lists_equal(ca.decls, cb.decls);
        }
      },
      a);
}

bool structurally_equal(const std::vector<Command>& a, const std::vector<Command>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!structurally_equal(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace ged
