#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ged {

// 1-based position into a source file; {0,0} means "unknown".
struct SourcePos {
  int line = 0;
  int column = 0;
};

enum class Order { Random, Systematic };

const char* order_name(Order o);

// ---------------------------------------------------------------------------
// Declaration payloads shared by the DSL front-end and the engine verbs.
// ---------------------------------------------------------------------------

struct CountSpec {
  std::int64_t n = 0;
};

struct LabelsSpec {
  std::vector<std::string> labels;
};

// One `key ~ count` entry of a per-parent nested_in form. The key selects a
// parent level either by its 1-based ordinal or by its label.
struct PerParentCount {
  std::variant<std::int64_t, std::string> parent;
  std::int64_t count = 0;
  SourcePos pos;
};

struct NestedSpec {
  std::string parent;
  SourcePos parent_pos;
  // Uniform count per parent level, or one explicit count per parent level.
  std::variant<std::int64_t, std::vector<PerParentCount>> counts;
};

struct UnitDecl {
  std::string name;
  std::variant<CountSpec, LabelsSpec, NestedSpec> spec;
  SourcePos pos;
};

struct TrtDecl {
  std::string name;
  std::variant<CountSpec, LabelsSpec> spec;
  SourcePos pos;
};

struct RcrdDecl {
  std::string name;
  std::string unit;
  SourcePos pos;
  SourcePos unit_pos;
};

struct AllotDecl {
  std::vector<std::string> sources;  // crossed when more than one
  std::string target;
  SourcePos pos;
  std::vector<SourcePos> source_pos;  // aligned with sources
  SourcePos target_pos;
};

struct AssignDecl {
  std::vector<Order> orders;  // one per allotment, or a single order for all
  std::optional<std::uint64_t> seed;
  SourcePos pos;
};

}  // namespace ged
