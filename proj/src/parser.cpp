#include "ged/parser.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "ged/model.hpp"

namespace ged {

namespace {

SourcePos pos_of(const Token& t) { return SourcePos{t.line, t.column}; }

[[noreturn]] void fail_at(SourcePos pos, std::string message,
                          std::vector<std::string> expected = {}) {
  throw ParseError{pos.line, pos.column, std::move(message), std::move(expected)};
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  DesignSpec program() {
    DesignSpec spec;
    expect(TokenKind::KwDesign, "a program starts with 'design'");
    if (at(TokenKind::String)) spec.title = advance().text;
    expect(TokenKind::LBrace, "expected '{' to open the design block");
    while (!at(TokenKind::RBrace)) {
      block(spec);
    }
    expect(TokenKind::RBrace, "expected '}'");
    if (!at(TokenKind::End)) {
      fail("unexpected text after the closing '}'", {token_kind_name(TokenKind::End)});
    }
    return spec;
  }

 private:
  const Token& peek() const { return tokens_[index_]; }
  bool at(TokenKind kind) const { return peek().kind == kind; }

  const Token& advance() { return tokens_[index_ < tokens_.size() - 1 ? index_++ : index_]; }

  [[noreturn]] void fail(std::string message, std::vector<std::string> expected = {}) const {
    fail_at(pos_of(peek()), std::move(message), std::move(expected));
  }

  const Token& expect(TokenKind kind, std::string message) {
    if (!at(kind)) fail(std::move(message), {token_kind_name(kind)});
    return advance();
  }

  void skip_separator() {
    if (at(TokenKind::Comma)) advance();
  }

  void block(DesignSpec& spec) {
    switch (peek().kind) {
      case TokenKind::KwUnits: units_block(spec); return;
      case TokenKind::KwTrts: trts_block(spec); return;
      case TokenKind::KwRcrds: rcrds_block(spec); return;
      case TokenKind::KwAllot: allot_block(spec); return;
      case TokenKind::KwAssign: assign_block(spec); return;
      default:
        fail("expected a block",
             {"'units'", "'trts'", "'rcrds'", "'allot'", "'assign'", "'}'"});
    }
  }

  void units_block(DesignSpec& spec) {
    advance();  // units
    expect(TokenKind::LBrace, "expected '{' after 'units'");
    while (!at(TokenKind::RBrace)) {
      UnitDecl decl;
      const Token& name = expect(TokenKind::Ident, "expected a unit name");
      decl.name = name.text;
      decl.pos = pos_of(name);
      expect(TokenKind::Eq, "expected '=' after the unit name");
      if (at(TokenKind::Int)) {
        decl.spec = CountSpec{positive_int("unit count")};
      } else if (at(TokenKind::LBracket)) {
        decl.spec = LabelsSpec{label_list()};
      } else if (at(TokenKind::KwNestedIn)) {
        decl.spec = nested_spec();
      } else {
        fail("expected a level count, label list or nested_in(...)",
             {token_kind_name(TokenKind::Int), token_kind_name(TokenKind::LBracket),
              token_kind_name(TokenKind::KwNestedIn)});
      }
      spec.unit_decls.push_back(std::move(decl));
      skip_separator();
    }
    advance();  // }
  }

  void trts_block(DesignSpec& spec) {
    advance();  // trts
    expect(TokenKind::LBrace, "expected '{' after 'trts'");
    while (!at(TokenKind::RBrace)) {
      TrtDecl decl;
      const Token& name = expect(TokenKind::Ident, "expected a treatment name");
      decl.name = name.text;
      decl.pos = pos_of(name);
      expect(TokenKind::Eq, "expected '=' after the treatment name");
      if (at(TokenKind::Int)) {
        decl.spec = CountSpec{positive_int("treatment count")};
      } else if (at(TokenKind::LBracket)) {
        decl.spec = LabelsSpec{label_list()};
      } else {
        fail("expected a level count or label list",
             {token_kind_name(TokenKind::Int), token_kind_name(TokenKind::LBracket)});
      }
      spec.trt_decls.push_back(std::move(decl));
      skip_separator();
    }
    advance();  // }
  }

  void rcrds_block(DesignSpec& spec) {
    advance();  // rcrds
    expect(TokenKind::LBrace, "expected '{' after 'rcrds'");
    while (!at(TokenKind::RBrace)) {
      RcrdDecl decl;
      const Token& name = expect(TokenKind::Ident, "expected a record name");
      decl.name = name.text;
      decl.pos = pos_of(name);
      expect(TokenKind::KwOn, "expected 'on' after the record name");
      const Token& unit = expect(TokenKind::Ident, "expected a unit name after 'on'");
      decl.unit = unit.text;
      decl.unit_pos = pos_of(unit);
      spec.rcrd_decls.push_back(std::move(decl));
      skip_separator();
    }
    advance();  // }
  }

  void allot_block(DesignSpec& spec) {
    advance();  // allot
    expect(TokenKind::LBrace, "expected '{' after 'allot'");
    while (!at(TokenKind::RBrace)) {
      AllotDecl decl;
      const Token& first = expect(TokenKind::Ident, "expected a treatment name");
      decl.pos = pos_of(first);
      decl.sources.push_back(first.text);
      decl.source_pos.push_back(pos_of(first));
      while (at(TokenKind::Colon)) {
        advance();
        const Token& next = expect(TokenKind::Ident, "expected a treatment name after ':'");
        decl.sources.push_back(next.text);
        decl.source_pos.push_back(pos_of(next));
      }
      expect(TokenKind::Tilde, "expected '~' between treatments and unit");
      const Token& target = expect(TokenKind::Ident, "expected a unit name after '~'");
      decl.target = target.text;
      decl.target_pos = pos_of(target);
      spec.allot_decls.push_back(std::move(decl));
      skip_separator();
    }
    advance();  // }
  }

  void assign_block(DesignSpec& spec) {
    const Token& kw = peek();
    if (spec.assign_decl.has_value()) {
      fail("a design may hold only one assign clause");
    }
    advance();  // assign
    AssignDecl decl;
    decl.pos = pos_of(kw);
    if (at(TokenKind::LBracket)) {
      advance();
      decl.orders.push_back(order());
      while (at(TokenKind::Comma)) {
        advance();
        decl.orders.push_back(order());
      }
      expect(TokenKind::RBracket, "expected ']' to close the order list");
    } else {
      decl.orders.push_back(order());
    }
    if (at(TokenKind::KwSeed)) {
      advance();
      decl.seed = expect(TokenKind::Int, "expected a seed value").int_value;
    }
    spec.assign_decl = std::move(decl);
  }

  Order order() {
    if (at(TokenKind::KwRandom)) {
      advance();
      return Order::Random;
    }
    if (at(TokenKind::KwSystematic)) {
      advance();
      return Order::Systematic;
    }
    fail("expected an assignment order",
         {token_kind_name(TokenKind::KwRandom), token_kind_name(TokenKind::KwSystematic)});
  }

  std::int64_t positive_int(const char* what) {
    const Token& tok = expect(TokenKind::Int, std::string("expected a ") + what);
    if (tok.int_value == 0) {
      fail_at(pos_of(tok), std::string(what) + " must be positive");
    }
    if (tok.int_value > kMaxLevels) {
      fail_at(pos_of(tok),
              "design exceeds the maximum of " + std::to_string(kMaxLevels) + " levels");
    }
    return static_cast<std::int64_t>(tok.int_value);
  }

  std::vector<std::string> label_list() {
    advance();  // [
    std::vector<std::string> labels;
    std::unordered_set<std::string> seen;
    for (;;) {
      const Token& tok = expect(TokenKind::String, "expected a quoted label");
      if (!seen.insert(tok.text).second) {
        fail_at(pos_of(tok), "label '" + tok.text + "' repeats in this list");
      }
      labels.push_back(tok.text);
      if (!at(TokenKind::Comma)) break;
      advance();
    }
    expect(TokenKind::RBracket, "expected ']' to close the label list");
    return labels;
  }

  NestedSpec nested_spec() {
    advance();  // nested_in
    expect(TokenKind::LParen, "expected '(' after 'nested_in'");
    NestedSpec nested;
    const Token& parent = expect(TokenKind::Ident, "expected the parent unit name");
    nested.parent = parent.text;
    nested.parent_pos = pos_of(parent);
    expect(TokenKind::Comma, "expected ',' after the parent unit");

    // Either a uniform count or per-parent `key ~ count` entries; an Int
    // followed by '~' starts a per-parent entry.
    const bool per_parent =
        at(TokenKind::String) ||
        (at(TokenKind::Int) && tokens_[index_ + 1].kind == TokenKind::Tilde);
    if (!per_parent) {
      nested.counts = positive_int("nested count");
    } else {
      std::vector<PerParentCount> entries;
      bool saw_ordinal = false;
      bool saw_label = false;
      for (;;) {
        PerParentCount entry;
        const Token& key = peek();
        entry.pos = pos_of(key);
        if (at(TokenKind::Int)) {
          saw_ordinal = true;
          entry.parent = static_cast<std::int64_t>(advance().int_value);
        } else if (at(TokenKind::String)) {
          saw_label = true;
          entry.parent = advance().text;
        } else {
          fail("expected a parent ordinal or label",
               {token_kind_name(TokenKind::Int), token_kind_name(TokenKind::String)});
        }
        if (saw_ordinal && saw_label) {
          fail_at(pos_of(key), "per-parent counts may not mix ordinal and label keys");
        }
        expect(TokenKind::Tilde, "expected '~' between parent and count");
        entry.count = positive_int("per-parent count");
        entries.push_back(std::move(entry));
        if (!at(TokenKind::Comma)) break;
        advance();
      }
      nested.counts = std::move(entries);
    }
    expect(TokenKind::RParen, "expected ')' to close nested_in");
    return nested;
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

// ---------------------------------------------------------------------------
// Semantic pass: name resolution, uniqueness, coverage, arity. Runs on the
// full AST so references may cross block boundaries in either direction,
// except nested_in parents, which must be declared earlier.
// ---------------------------------------------------------------------------

struct SymbolInfo {
  Role role = Role::Unit;
  std::size_t unit_index = 0;  // for units: position in unit_decls
};

class SemanticChecker {
 public:
  void run(const DesignSpec& spec) {
    check_duplicate_names(spec);
    collect_symbols(spec);
    check_units(spec);
    check_rcrds(spec);
    check_allot(spec);
    check_assign(spec);
  }

 private:
  void check_duplicate_names(const DesignSpec& spec) {
    std::vector<std::pair<SourcePos, const std::string*>> names;
    for (const auto& d : spec.unit_decls) names.emplace_back(d.pos, &d.name);
    for (const auto& d : spec.trt_decls) names.emplace_back(d.pos, &d.name);
    for (const auto& d : spec.rcrd_decls) names.emplace_back(d.pos, &d.name);
    std::stable_sort(names.begin(), names.end(), [](const auto& a, const auto& b) {
      return std::pair(a.first.line, a.first.column) < std::pair(b.first.line, b.first.column);
    });
    std::unordered_set<std::string_view> seen;
    for (const auto& [pos, name] : names) {
      if (!seen.insert(*name).second) {
        fail_at(pos, "duplicate factor name '" + *name + "'");
      }
    }
  }

  void collect_symbols(const DesignSpec& spec) {
    for (std::size_t i = 0; i < spec.unit_decls.size(); ++i) {
      symbols_.emplace(spec.unit_decls[i].name, SymbolInfo{Role::Unit, i});
    }
    for (const auto& d : spec.trt_decls) symbols_.emplace(d.name, SymbolInfo{Role::Treatment, 0});
    for (const auto& d : spec.rcrd_decls) symbols_.emplace(d.name, SymbolInfo{Role::Record, 0});
  }

  [[noreturn]] void fail_reference(SourcePos pos, const std::string& name, Role wanted) {
    const auto it = symbols_.find(name);
    if (it == symbols_.end()) {
      fail_at(pos, "unknown " + std::string(role_name(wanted)) + " '" + name + "'");
    }
    fail_at(pos, "'" + name + "' is a " + role_name(it->second.role) + ", not a " +
                     role_name(wanted));
  }

  const SymbolInfo& resolve(SourcePos pos, const std::string& name, Role wanted) {
    const auto it = symbols_.find(name);
    if (it == symbols_.end() || it->second.role != wanted) fail_reference(pos, name, wanted);
    return it->second;
  }

  void check_units(const DesignSpec& spec) {
    std::int64_t total = 0;
    auto charge = [&](std::int64_t count, SourcePos pos) {
      total += count;
      if (static_cast<std::size_t>(total) > kMaxLevels) {
        fail_at(pos,
                "design exceeds the maximum of " + std::to_string(kMaxLevels) + " levels");
      }
    };

    for (std::size_t i = 0; i < spec.unit_decls.size(); ++i) {
      const UnitDecl& decl = spec.unit_decls[i];
      if (const auto* count = std::get_if<CountSpec>(&decl.spec)) {
        unit_count_[decl.name] = count->n;
        charge(count->n, decl.pos);
      } else if (const auto* labels = std::get_if<LabelsSpec>(&decl.spec)) {
        unit_count_[decl.name] = static_cast<std::int64_t>(labels->labels.size());
        unit_labels_[decl.name] = &labels->labels;
        charge(unit_count_[decl.name], decl.pos);
      } else {
        const auto& nested = std::get<NestedSpec>(decl.spec);
        const auto parent_it = symbols_.find(nested.parent);
        if (parent_it == symbols_.end() || parent_it->second.role != Role::Unit) {
          fail_reference(nested.parent_pos, nested.parent, Role::Unit);
        }
        if (parent_it->second.unit_index >= i) {
          fail_at(nested.parent_pos,
                  "unit '" + nested.parent + "' must be declared before '" + decl.name + "'");
        }
        const std::int64_t parent_count = unit_count_.at(nested.parent);
        std::int64_t count = 0;
        if (const auto* uniform = std::get_if<std::int64_t>(&nested.counts)) {
          count = *uniform * parent_count;
        } else {
          count = check_per_parent(decl, nested, parent_count);
        }
        unit_count_[decl.name] = count;
        charge(count, decl.pos);
      }
    }
  }

  std::int64_t check_per_parent(const UnitDecl& decl, const NestedSpec& nested,
                                std::int64_t parent_count) {
    const auto& entries = std::get<std::vector<PerParentCount>>(nested.counts);
    // Parent labels: explicit if declared with a label list, generated
    // <name><k> otherwise.
    const std::vector<std::string>* explicit_labels = nullptr;
    if (const auto it = unit_labels_.find(nested.parent); it != unit_labels_.end()) {
      explicit_labels = it->second;
    }

    std::vector<bool> covered(static_cast<std::size_t>(parent_count), false);
    std::int64_t total = 0;
    for (const PerParentCount& entry : entries) {
      std::size_t index = 0;
      if (const auto* ordinal = std::get_if<std::int64_t>(&entry.parent)) {
        if (*ordinal < 1 || *ordinal > parent_count) {
          fail_at(entry.pos, "'" + nested.parent + "' has no level " + std::to_string(*ordinal));
        }
        index = static_cast<std::size_t>(*ordinal) - 1;
      } else {
        const std::string& label = std::get<std::string>(entry.parent);
        bool found = false;
        for (std::size_t k = 0; k < static_cast<std::size_t>(parent_count); ++k) {
          const std::string candidate =
              explicit_labels ? (*explicit_labels)[k] : nested.parent + std::to_string(k + 1);
          if (candidate == label) {
            index = k;
            found = true;
            break;
          }
        }
        if (!found) {
          fail_at(entry.pos, "'" + nested.parent + "' has no level labelled '" + label + "'");
        }
      }
      if (covered[index]) {
        fail_at(entry.pos, "parent level of '" + decl.name + "' is counted twice");
      }
      covered[index] = true;
      total += entry.count;
    }
    for (std::size_t k = 0; k < covered.size(); ++k) {
      if (!covered[k]) {
        const std::string label =
            explicit_labels ? (*explicit_labels)[k] : nested.parent + std::to_string(k + 1);
        fail_at(decl.pos, "per-parent counts for '" + decl.name + "' miss level '" + label + "'");
      }
    }
    return total;
  }

  void check_rcrds(const DesignSpec& spec) {
    for (const RcrdDecl& decl : spec.rcrd_decls) {
      resolve(decl.unit_pos, decl.unit, Role::Unit);
    }
  }

  void check_allot(const DesignSpec& spec) {
    std::unordered_set<std::string_view> used;
    for (const AllotDecl& decl : spec.allot_decls) {
      for (std::size_t s = 0; s < decl.sources.size(); ++s) {
        resolve(decl.source_pos[s], decl.sources[s], Role::Treatment);
        if (!used.insert(decl.sources[s]).second) {
          fail_at(decl.source_pos[s],
                  "treatment '" + decl.sources[s] + "' is already allotted");
        }
      }
      resolve(decl.target_pos, decl.target, Role::Unit);
    }
  }

  void check_assign(const DesignSpec& spec) {
    if (!spec.assign_decl.has_value()) return;
    const AssignDecl& decl = *spec.assign_decl;
    if (spec.allot_decls.empty()) {
      fail_at(decl.pos, "assign requires at least one allotment");
    }
    if (decl.orders.size() != 1 && decl.orders.size() != spec.allot_decls.size()) {
      fail_at(decl.pos, "assign declares " + std::to_string(decl.orders.size()) +
                            " orders for " + std::to_string(spec.allot_decls.size()) +
                            " allotments");
    }
  }

  std::unordered_map<std::string, SymbolInfo> symbols_;
  std::unordered_map<std::string, std::int64_t> unit_count_;
  std::unordered_map<std::string, const std::vector<std::string>*> unit_labels_;
};

}  // namespace

ParseResult<DesignSpec> parse(std::string_view source) {
  ParseResult<DesignSpec> result;
  auto tokens = tokenize(source);
  if (!tokens.ok()) {
    result.error = std::move(tokens.error);
    return result;
  }
  try {
    Parser parser(std::move(*tokens.value));
    DesignSpec spec = parser.program();
    SemanticChecker().run(spec);
    result.value = std::move(spec);
  } catch (ParseError& err) {
    result.error = std::move(err);
  }
  return result;
}

}  // namespace ged
