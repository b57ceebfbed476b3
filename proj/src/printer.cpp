#include "ged/printer.hpp"

#include <sstream>

namespace ged {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

void print_unit(std::ostream& out, const UnitDecl& decl) {
  out << "    " << decl.name << " = ";
  if (const auto* count = std::get_if<CountSpec>(&decl.spec)) {
    out << count->n;
  } else if (const auto* labels = std::get_if<LabelsSpec>(&decl.spec)) {
    out << "[";
    for (std::size_t i = 0; i < labels->labels.size(); ++i) {
      out << (i ? ", " : "") << quoted(labels->labels[i]);
    }
    out << "]";
  } else {
    const auto& nested = std::get<NestedSpec>(decl.spec);
    out << "nested_in(" << nested.parent;
    if (const auto* uniform = std::get_if<std::int64_t>(&nested.counts)) {
      out << ", " << *uniform;
    } else {
      for (const auto& entry : std::get<std::vector<PerParentCount>>(nested.counts)) {
        out << ", ";
        if (const auto* ordinal = std::get_if<std::int64_t>(&entry.parent)) {
          out << *ordinal;
        } else {
          out << quoted(std::get<std::string>(entry.parent));
        }
        out << " ~ " << entry.count;
      }
    }
    out << ")";
  }
  out << "\n";
}

}  // namespace

std::string print(const DesignSpec& spec) {
  std::ostringstream out;
  out << "design ";
  if (spec.title) out << quoted(*spec.title) << " ";
  out << "{\n";

  if (!spec.unit_decls.empty()) {
    out << "  units {\n";
    for (const UnitDecl& decl : spec.unit_decls) print_unit(out, decl);
    out << "  }\n";
  }
  if (!spec.trt_decls.empty()) {
    out << "  trts {\n";
    for (const TrtDecl& decl : spec.trt_decls) {
      out << "    " << decl.name << " = ";
      if (const auto* count = std::get_if<CountSpec>(&decl.spec)) {
        out << count->n;
      } else {
        const auto& labels = std::get<LabelsSpec>(decl.spec).labels;
        out << "[";
        for (std::size_t i = 0; i < labels.size(); ++i) {
          out << (i ? ", " : "") << quoted(labels[i]);
        }
        out << "]";
      }
      out << "\n";
    }
    out << "  }\n";
  }
  if (!spec.rcrd_decls.empty()) {
    out << "  rcrds {\n";
    for (const RcrdDecl& decl : spec.rcrd_decls) {
      out << "    " << decl.name << " on " << decl.unit << "\n";
    }
    out << "  }\n";
  }
  if (!spec.allot_decls.empty()) {
    out << "  allot {\n";
    for (const AllotDecl& decl : spec.allot_decls) {
      out << "    ";
      for (std::size_t i = 0; i < decl.sources.size(); ++i) {
        out << (i ? ":" : "") << decl.sources[i];
      }
      out << " ~ " << decl.target << "\n";
    }
    out << "  }\n";
  }
  if (spec.assign_decl) {
    const AssignDecl& decl = *spec.assign_decl;
    out << "  assign ";
    if (decl.orders.size() == 1) {
      out << order_name(decl.orders.front());
    } else {
      out << "[";
      for (std::size_t i = 0; i < decl.orders.size(); ++i) {
        out << (i ? ", " : "") << order_name(decl.orders[i]);
      }
      out << "]";
    }
    if (decl.seed) out << " seed " << *decl.seed;
    out << "\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace ged
