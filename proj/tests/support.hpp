#pragma once

// Shared helpers for the test suites: canonical example programs, a spec
// generator for property tests, a minimal DOT syntax checker, and table
// lookup utilities. Test-only; the library never includes this.

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ged/ast.hpp"
#include "ged/rng.hpp"
#include "ged/table.hpp"

namespace ged::test {

// ---------------------------------------------------------------------------
// Filesystem + stream helpers
// ---------------------------------------------------------------------------

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ged-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Redirects one std stream into a buffer for the lifetime of the guard.
class CaptureStream {
 public:
  explicit CaptureStream(std::ostream& stream) : stream_(stream), old_(stream.rdbuf(buf_.rdbuf())) {}
  ~CaptureStream() { stream_.rdbuf(old_); }
  std::string text() const { return buf_.str(); }

 private:
  std::ostream& stream_;
  std::ostringstream buf_;
  std::streambuf* old_;
};

// ---------------------------------------------------------------------------
// Canonical example programs (same designs as designs/*.ged).
// ---------------------------------------------------------------------------

inline constexpr const char* kFisherProgram = R"(design "Fisher's split-plot design" {
  units {
    patch = 36
    plot = nested_in(patch, 3)
  }
  trts {
    variety = 12
    fertilizer = ["basal", "sulphate", "chloride"]
  }
  rcrds {
    yield on plot
    biomass on patch
  }
  allot {
    variety ~ patch
    fertilizer ~ plot
  }
  assign [random, random] seed 1
}
)";

inline constexpr const char* kChicksProgram = R"(design "Complex nested factorial design" {
  trts {
    insecticide = 3
    dose_level = ["low", "high"]
    food_type = ["sprayed", "unsprayed"]
  }
  units {
    week = 3
    strip = nested_in(week, 3)
    swath = nested_in(strip, 2)
    pen = nested_in(swath, 2)
    chick = nested_in(pen, 6)
  }
  allot {
    insecticide ~ strip
    dose_level ~ swath
    food_type ~ pen
  }
  assign random seed 1
}
)";

inline constexpr const char* kMotionProgram = R"(design "Motion sickness incidence" {
  units {
    experiment = 4
    subject = nested_in(experiment, 1 ~ 21, 2 ~ 20, 3 ~ 29, 4 ~ 59)
  }
  trts {
    frequency = ["0.167", "0.250"]
    acceleration = ["0.111", "0.222"]
  }
  allot {
    frequency:acceleration ~ experiment
  }
  assign systematic
}
)";

// ---------------------------------------------------------------------------
// Table helpers
// ---------------------------------------------------------------------------

inline std::size_t col_index(const DesignTable& t, std::string_view name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i].name == name) return i;
  }
  throw std::runtime_error("no such column: " + std::string(name));
}

inline std::vector<std::string> column_values(const DesignTable& t, std::string_view name) {
  const std::size_t c = col_index(t, name);
  std::vector<std::string> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) out.push_back(row[c]);
  return out;
}

// by-column value -> distinct values seen in the of-column.
inline std::map<std::string, std::set<std::string>> group_distinct(const DesignTable& t,
                                                                   std::string_view by,
                                                                   std::string_view of) {
  const std::size_t b = col_index(t, by);
  const std::size_t o = col_index(t, of);
  std::map<std::string, std::set<std::string>> out;
  for (const auto& row : t.rows) out[row[b]].insert(row[o]);
  return out;
}

inline std::map<std::string, std::size_t> value_counts(const std::vector<std::string>& vals) {
  std::map<std::string, std::size_t> out;
  for (const auto& v : vals) ++out[v];
  return out;
}

// ---------------------------------------------------------------------------
// Minimal DOT syntax checker for the subset the exporter emits: optional
// // comments, digraph [id] { node/edge statements with [key=value] attrs }.
// ---------------------------------------------------------------------------

class DotChecker {
 public:
  explicit DotChecker(std::string_view src) : src_(src) {}

  bool check(std::string* why = nullptr) {
    try {
      skip_trivia();
      expect_word("digraph");
      skip_trivia();
      if (peek() != '{') id();  // optional graph name
      expect_char('{');
      skip_trivia();
      while (peek() != '}') {
        statement();
        skip_trivia();
      }
      expect_char('}');
      skip_trivia();
      if (pos_ != src_.size()) fail("trailing text after closing brace");
      return true;
    } catch (const std::runtime_error& e) {
      if (why) *why = e.what();
      return false;
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error(msg + " at byte " + std::to_string(pos_));
  }

  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
      } else if (src_.compare(pos_, 2, "//") == 0) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void expect_char(char c) {
    skip_trivia();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void expect_word(const std::string& w) {
    skip_trivia();
    if (src_.compare(pos_, w.size(), w) != 0) fail("expected '" + w + "'");
    pos_ += w.size();
  }

  std::string id() {
    skip_trivia();
    if (peek() == '"') {
      ++pos_;
      std::string out;
      while (pos_ < src_.size() && src_[pos_] != '"') {
        if (src_[pos_] == '\\') {
          if (pos_ + 1 >= src_.size()) fail("dangling escape in quoted id");
          out += src_[pos_ + 1];
          pos_ += 2;
        } else {
          out += src_[pos_++];
        }
      }
      if (pos_ == src_.size()) fail("unterminated quoted id");
      ++pos_;
      return out;
    }
    std::string out;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
            src_[pos_] == '.')) {
      out += src_[pos_++];
    }
    if (out.empty()) fail("expected identifier");
    return out;
  }

  void attr_list() {
    expect_char('[');
    skip_trivia();
    while (peek() != ']') {
      id();
      expect_char('=');
      id();
      skip_trivia();
      if (peek() == ',' || peek() == ';') ++pos_;
      skip_trivia();
    }
    expect_char(']');
  }

  void statement() {
    id();
    skip_trivia();
    if (peek() == '-') {
      expect_char('-');
      expect_char('>');
      id();
      skip_trivia();
    } else if (peek() == '=') {  // graph attribute like rankdir=BT
      ++pos_;
      id();
      skip_trivia();
    }
    if (peek() == '[') attr_list();
    skip_trivia();
    if (peek() == ';') ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline bool dot_valid(const std::string& src, std::string* why = nullptr) {
  return DotChecker(src).check(why);
}

// ---------------------------------------------------------------------------
// Random spec generator for round-trip and builder-invariant properties.
// Every generated spec passes the parser's semantic checks by construction.
// ---------------------------------------------------------------------------

class SpecGen {
 public:
  explicit SpecGen(std::uint64_t seed) : rng_(seed) {}

  DesignSpec spec() {
    DesignSpec s;
    next_name_ = 0;
    if (chance(70)) s.title = label(true);

    // Units: a forest of 1..4, later ones possibly nested in earlier ones.
    struct UnitInfo {
      std::string name;
      std::int64_t count = 0;
      std::vector<std::string> labels;  // effective level labels
    };
    std::vector<UnitInfo> units;
    const std::size_t n_units = 1 + pick(4);
    for (std::size_t i = 0; i < n_units; ++i) {
      UnitDecl d;
      d.name = name("u");
      UnitInfo info{d.name, 0, {}};
      if (i > 0 && chance(55)) {
        const UnitInfo& parent = units[pick(units.size())];
        NestedSpec nested;
        nested.parent = parent.name;
        if (chance(50)) {
          const std::int64_t k = 1 + static_cast<std::int64_t>(pick(3));
          nested.counts = k;
          info.count = k * parent.count;
        } else {
          std::vector<PerParentCount> per;
          const bool by_label = chance(40);
          for (std::int64_t p = 0; p < parent.count; ++p) {
            PerParentCount ppc;
            if (by_label) {
              ppc.parent = parent.labels[static_cast<std::size_t>(p)];
            } else {
              ppc.parent = p + 1;
            }
            ppc.count = 1 + static_cast<std::int64_t>(pick(3));
            info.count += ppc.count;
            per.push_back(std::move(ppc));
          }
          shuffle(per);
          nested.counts = std::move(per);
        }
        for (std::int64_t k = 1; k <= info.count; ++k)
          info.labels.push_back(info.name + std::to_string(k));
        d.spec = std::move(nested);
      } else if (chance(30)) {
        LabelsSpec ls;
        ls.labels = distinct_labels(1 + pick(4));
        info.count = static_cast<std::int64_t>(ls.labels.size());
        info.labels = ls.labels;
        d.spec = std::move(ls);
      } else {
        const std::int64_t n = 1 + static_cast<std::int64_t>(pick(5));
        d.spec = CountSpec{n};
        info.count = n;
        for (std::int64_t k = 1; k <= n; ++k) info.labels.push_back(info.name + std::to_string(k));
      }
      s.unit_decls.push_back(std::move(d));
      units.push_back(std::move(info));
    }

    // Treatments.
    const std::size_t n_trts = pick(4);
    std::vector<std::string> trt_names;
    for (std::size_t i = 0; i < n_trts; ++i) {
      TrtDecl d;
      d.name = name("t");
      if (chance(40)) {
        d.spec = LabelsSpec{distinct_labels(1 + pick(4))};
      } else {
        d.spec = CountSpec{1 + static_cast<std::int64_t>(pick(5))};
      }
      trt_names.push_back(d.name);
      s.trt_decls.push_back(std::move(d));
    }

    // Records.
    const std::size_t n_rcrds = pick(3);
    for (std::size_t i = 0; i < n_rcrds; ++i) {
      RcrdDecl d;
      d.name = name("r");
      d.unit = units[pick(units.size())].name;
      s.rcrd_decls.push_back(std::move(d));
    }

    // Allotments: each treatment used at most once, crossings of 1..2.
    shuffle(trt_names);
    std::size_t i = 0;
    while (i < trt_names.size()) {
      if (chance(25)) {  // leave this treatment unallotted
        ++i;
        continue;
      }
      AllotDecl d;
      d.sources.push_back(trt_names[i++]);
      if (i < trt_names.size() && chance(35)) d.sources.push_back(trt_names[i++]);
      d.target = units[pick(units.size())].name;
      s.allot_decls.push_back(std::move(d));
    }

    if (!s.allot_decls.empty() && chance(80)) {
      AssignDecl a;
      const std::size_t n = chance(50) ? 1 : s.allot_decls.size();
      for (std::size_t k = 0; k < n; ++k)
        a.orders.push_back(chance(75) ? Order::Random : Order::Systematic);
      if (chance(70)) a.seed = rng_.next() % 1000;
      s.assign_decl = std::move(a);
    }
    return s;
  }

  // A spec whose units form >= 2 disconnected nesting trees.
  DesignSpec disconnected_spec() {
    DesignSpec s = spec();
    UnitDecl extra;
    extra.name = "island_" + std::to_string(next_name_++);
    extra.spec = CountSpec{1 + static_cast<std::int64_t>(pick(3))};
    s.unit_decls.push_back(std::move(extra));
    return s;
  }

  std::uint64_t pick(std::uint64_t n) { return rng_.bounded(n); }
  bool chance(unsigned percent) { return rng_.bounded(100) < percent; }

 private:
  std::string name(const char* prefix) { return prefix + std::to_string(next_name_++); }

  std::string label(bool allow_exotic) {
    static const char plain[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    static const char exotic[] = " ,\"\\#{}[]~:=()";
    std::string out;
    const std::size_t len = 1 + pick(10);
    for (std::size_t i = 0; i < len; ++i) {
      if (allow_exotic && chance(20)) {
        out += exotic[pick(sizeof(exotic) - 1)];
      } else {
        out += plain[pick(sizeof(plain) - 1)];
      }
    }
    return out;
  }

  std::vector<std::string> distinct_labels(std::size_t n) {
    std::set<std::string> seen;
    while (seen.size() < n) seen.insert(label(true));
    return {seen.begin(), seen.end()};
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[rng_.bounded(i)]);
    }
  }

  Rng rng_;
  std::size_t next_name_ = 0;
};

}  // namespace ged::test
