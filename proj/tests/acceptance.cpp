// Acceptance suite: end-to-end checks of the shipped designs, the
// randomization contracts, the DSL round-trip, and the CLI error behavior.
// Prints one PASS/FAIL line per criterion; exits nonzero if any fail.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ged/cli.hpp"
#include "ged/command.hpp"
#include "ged/csv.hpp"
#include "ged/engine.hpp"
#include "ged/parser.hpp"
#include "ged/printer.hpp"
#include "ged/rng.hpp"
#include "ged/table.hpp"
#include "support.hpp"

#ifndef GED_DESIGNS_DIR
#error "GED_DESIGNS_DIR must be defined"
#endif
#ifndef GED_BIN
#error "GED_BIN must be defined"
#endif

namespace {

namespace fs = std::filesystem;
using namespace ged;

struct Checker {
  int failures = 0;
  std::string first_failure;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures;
    if (first_failure.empty()) first_failure = what;
  }
};

int g_criteria_failed = 0;

void criterion(int id, const std::string& name, const std::function<void(Checker&)>& body) {
  Checker c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("unexpected exception: ") + e.what());
  }
  if (c.failures == 0) {
    std::cout << "PASS  criterion " << id << ": " << name << "\n";
  } else {
    ++g_criteria_failed;
    std::cout << "FAIL  criterion " << id << ": " << name << " (" << c.failures
              << " checks failed; first: " << c.first_failure << ")\n";
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Design build_file(const fs::path& p) {
  auto parsed = parse(slurp(p));
  if (!parsed.ok()) throw std::runtime_error(p.string() + ": " + parsed.error->render());
  return build(*parsed.value);
}

// Runs the real binary, returns its exit code and captured stderr.
std::pair<int, std::string> spawn_cli(const std::string& args, const fs::path& err_file) {
  const std::string cmd =
      std::string(GED_BIN) + " " + args + " >/dev/null 2>" + err_file.string();
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(err_file)};
}

double elapsed_seconds(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const fs::path kDesigns = fs::path(GED_DESIGNS_DIR);

// ---------------------------------------------------------------------------

void criterion_fisher(Checker& c) {
  DesignTable t;
  const double secs = elapsed_seconds([&] { t = serve_table(build_file(kDesigns / "fisher.ged")); });
  c.require(secs < 1.0, "runtime under one second");

  c.require(t.rows.size() == 108, "108 rows, got " + std::to_string(t.rows.size()));
  std::vector<std::string> names;
  for (const auto& col : t.columns) names.push_back(col.name);
  c.require(names == std::vector<std::string>{"patch", "plot", "variety", "fertilizer", "yield",
                                              "biomass"},
            "column set/order");

  const auto by_variety = test::group_distinct(t, "variety", "patch");
  c.require(by_variety.size() == 12, "12 varieties present");
  for (const auto& [v, patches] : by_variety) {
    c.require(patches.size() == 3, "variety " + v + " in exactly 3 distinct patches");
  }
  for (const auto& [v, n] : test::value_counts(test::column_values(t, "variety"))) {
    c.require(n == 9, "variety " + v + " on exactly 9 rows");
  }
  for (const auto& [p, ferts] : test::group_distinct(t, "patch", "fertilizer")) {
    c.require(ferts.size() == 3, "patch " + p + " has all 3 fertilizer levels");
  }
  const auto patch_rows = test::value_counts(test::column_values(t, "patch"));
  for (const auto& [p, n] : patch_rows) c.require(n == 3, "patch " + p + " has 3 plots");
  for (const auto& [p, vs] : test::group_distinct(t, "patch", "variety")) {
    c.require(vs.size() == 1, "variety constant within patch " + p);
  }
}

void criterion_chicks(Checker& c) {
  DesignTable t;
  const double secs = elapsed_seconds([&] { t = serve_table(build_file(kDesigns / "chicks.ged")); });
  c.require(secs < 1.0, "runtime under one second");

  c.require(t.rows.size() == 216, "216 rows, got " + std::to_string(t.rows.size()));

  // Within each week every insecticide appears on exactly one strip.
  std::map<std::string, std::map<std::string, std::set<std::string>>> week_ins_strips;
  const std::size_t week = test::col_index(t, "week");
  const std::size_t strip = test::col_index(t, "strip");
  const std::size_t ins = test::col_index(t, "insecticide");
  for (const auto& row : t.rows) week_ins_strips[row[week]][row[ins]].insert(row[strip]);
  c.require(week_ins_strips.size() == 3, "3 weeks");
  for (const auto& [w, m] : week_ins_strips) {
    c.require(m.size() == 3, "week " + w + " saw all 3 insecticides");
    for (const auto& [i, strips] : m) {
      c.require(strips.size() == 1, "insecticide " + i + " on one strip in week " + w);
    }
  }

  // Within each strip both doses appear exactly once across its swaths.
  std::map<std::string, std::map<std::string, std::set<std::string>>> strip_dose_swaths;
  const std::size_t swath = test::col_index(t, "swath");
  const std::size_t dose = test::col_index(t, "dose_level");
  for (const auto& row : t.rows) strip_dose_swaths[row[strip]][row[dose]].insert(row[swath]);
  for (const auto& [s, m] : strip_dose_swaths) {
    c.require(m.size() == 2, "strip " + s + " has both dose levels");
    for (const auto& [dl, swaths] : m) {
      c.require(swaths.size() == 1, "dose " + dl + " on one swath of strip " + s);
    }
  }

  // Within each swath both food types appear exactly once across its pens.
  std::map<std::string, std::map<std::string, std::set<std::string>>> swath_food_pens;
  const std::size_t pen = test::col_index(t, "pen");
  const std::size_t food = test::col_index(t, "food_type");
  for (const auto& row : t.rows) swath_food_pens[row[swath]][row[food]].insert(row[pen]);
  for (const auto& [s, m] : swath_food_pens) {
    c.require(m.size() == 2, "swath " + s + " has both food types");
    for (const auto& [f, pens] : m) {
      c.require(pens.size() == 1, "food " + f + " on one pen of swath " + s);
    }
  }

  // All 6 chicks in a pen share identical treatment columns.
  const auto pen_rows = test::value_counts(test::column_values(t, "pen"));
  for (const auto& [p, n] : pen_rows) c.require(n == 6, "pen " + p + " holds 6 chicks");
  for (const char* trt : {"insecticide", "dose_level", "food_type"}) {
    for (const auto& [p, vals] : test::group_distinct(t, "pen", trt)) {
      c.require(vals.size() == 1, std::string(trt) + " constant within pen " + p);
    }
  }
}

void criterion_motion(Checker& c) {
  DesignTable t;
  const double secs = elapsed_seconds([&] { t = serve_table(build_file(kDesigns / "motion.ged")); });
  c.require(secs < 1.0, "runtime under one second");

  c.require(t.rows.size() == 129, "129 rows, got " + std::to_string(t.rows.size()));
  const auto counts = test::value_counts(test::column_values(t, "experiment"));
  c.require(counts.at("experiment1") == 21, "experiment1 has 21 subjects");
  c.require(counts.at("experiment2") == 20, "experiment2 has 20 subjects");
  c.require(counts.at("experiment3") == 29, "experiment3 has 29 subjects");
  c.require(counts.at("experiment4") == 59, "experiment4 has 59 subjects");

  const std::map<std::string, std::pair<std::string, std::string>> expected = {
      {"experiment1", {"0.167", "0.111"}},
      {"experiment2", {"0.167", "0.222"}},
      {"experiment3", {"0.250", "0.111"}},
      {"experiment4", {"0.250", "0.222"}},
  };
  const std::size_t exp = test::col_index(t, "experiment");
  const std::size_t f = test::col_index(t, "frequency");
  const std::size_t a = test::col_index(t, "acceleration");
  for (const auto& row : t.rows) {
    const auto& want = expected.at(row[exp]);
    if (row[f] != want.first || row[a] != want.second) {
      c.require(false, row[exp] + " mapped to (" + row[f] + "," + row[a] + ")");
      return;
    }
  }
}

void criterion_determinism(Checker& c) {
  for (const char* name : {"fisher.ged", "chicks.ged", "motion.ged"}) {
    const std::string once = to_csv(serve_table(build_file(kDesigns / name)));
    const std::string twice = to_csv(serve_table(build_file(kDesigns / name)));
    c.require(once == twice, std::string(name) + " byte-identical across runs");
    c.require(!once.empty(), std::string(name) + " produced output");
  }

  // 20 distinct seed pairs; at least 19 must change the variety layout.
  auto fisher = parse(slurp(kDesigns / "fisher.ged"));
  c.require(fisher.ok(), "fisher parses");
  int differing = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    DesignSpec a = *fisher.value;
    DesignSpec b = *fisher.value;
    a.assign_decl->seed = 2 * k;
    b.assign_decl->seed = 2 * k + 1;
    const auto va = test::column_values(serve_table(build(a)), "variety");
    const auto vb = test::column_values(serve_table(build(b)), "variety");
    if (va != vb) ++differing;
  }
  c.require(differing >= 19,
            "variety assignments differ for " + std::to_string(differing) + "/20 seed pairs");
}

void criterion_properties(Checker& c) {
  // Balance / near-balance over 1,000 generated (n, t, seed) triples.
  Rng gen(0xACCE57);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + gen.bounded(48);
    const std::size_t t = 1 + gen.bounded(16);
    ConstraintGroup group;
    for (std::size_t m = 0; m < n; ++m) group.members.push_back(LevelId{m});
    const std::vector<Combo> combos(t);
    Rng rng(gen.next());
    const auto picks = assign_random(group, combos, rng);
    std::vector<std::size_t> counts(t, 0);
    for (const std::size_t p : picks) ++counts[p];
    const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    if (total != n) {
      c.require(false, "assignment covers the group");
      return;
    }
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    if (n % t == 0) {
      if (*lo != n / t || *hi != n / t) {
        c.require(false, "exact balance at n=" + std::to_string(n) + " t=" + std::to_string(t));
        return;
      }
    } else if (*hi - *lo > 1) {
      c.require(false, "near balance at n=" + std::to_string(n) + " t=" + std::to_string(t));
      return;
    }
  }

  // Pretty-print / parse round-trip over 500 generated specs.
  test::SpecGen spec_gen(0x5EED);
  for (int i = 0; i < 500; ++i) {
    const DesignSpec spec = spec_gen.spec();
    const std::string text = print(spec);
    auto reparsed = parse(text);
    if (!reparsed.ok() || !structurally_equal(spec, *reparsed.value) ||
        !structurally_equal(lower(spec), lower(*reparsed.value))) {
      c.require(false, "round-trip of generated spec " + std::to_string(i));
      return;
    }
  }

  // Acyclicity + forest invariants after every builder step.
  test::SpecGen builder_gen(0xB11D);
  for (int i = 0; i < 200; ++i) {
    const DesignSpec spec = builder_gen.spec();
    Design d;
    for (const Command& cmd : lower(spec)) {
      std::visit(
          [&](const auto& cc) {
            using T = std::decay_t<decltype(cc)>;
            if constexpr (std::is_same_v<T, NewDesignCmd>) {
              d = new_design(cc.title);
            } else if constexpr (std::is_same_v<T, SetUnitsCmd>) {
              d.set_units(cc.decls);
            } else if constexpr (std::is_same_v<T, SetTrtsCmd>) {
              d.set_trts(cc.decls);
            } else if constexpr (std::is_same_v<T, SetRcrdsCmd>) {
              d.set_rcrds(cc.decls);
            } else if constexpr (std::is_same_v<T, AllotTrtsCmd>) {
              d.allot_trts(cc.decls);
            } else {
              d.assign_trts(cc.spec);
            }
          },
          cmd);
      if (!validate(d).empty()) {
        c.require(false, "builder invariants after step of spec " + std::to_string(i));
        return;
      }
    }
  }

  // Serve rejects every generated design with >= 2 disconnected unit trees.
  test::SpecGen island_gen(0x157A);
  for (int i = 0; i < 200; ++i) {
    const Design d = build(island_gen.disconnected_spec());
    bool threw = false;
    try {
      serve_table(d);
    } catch (const UnservableError&) {
      threw = true;
    }
    if (!threw) {
      c.require(false, "disconnected design " + std::to_string(i) + " served");
      return;
    }
  }
}

void criterion_diagnostics(Checker& c) {
  const std::regex position_re(":[0-9]+:[0-9]+: ");
  test::TempDir tmp;

  // Broken corpus through the real binary.
  std::size_t corpus_size = 0;
  for (const auto& entry : fs::directory_iterator(kDesigns / "broken")) {
    if (entry.path().extension() != ".ged") continue;
    ++corpus_size;
    const auto [code, err] = spawn_cli("check " + entry.path().string(), tmp.file("err.txt"));
    c.require(code == 1, entry.path().filename().string() + " exits 1 (got " +
                             std::to_string(code) + ")");
    c.require(std::regex_search(err, position_re),
              entry.path().filename().string() + " reports a position");
  }
  c.require(corpus_size >= 15,
            "broken corpus holds >= 15 files, found " + std::to_string(corpus_size));

  // 10,000 random-byte inputs through the same entry point the binary uses.
  const auto fuzz_path = tmp.file("fuzz.ged");
  Rng rng(0xF0CC);
  {
    test::CaptureStream mute_err(std::cerr);  // diagnostics are expected noise here
    test::CaptureStream mute_out(std::cout);
    for (int i = 0; i < 10'000; ++i) {
      std::string blob;
      const std::size_t len = rng.bounded(300);
      for (std::size_t k = 0; k < len; ++k) blob += static_cast<char>(rng.next() & 0xFF);
      test::write_file(fuzz_path, blob);
      const int code = cli::run({"check", fuzz_path.string()});
      if (code != 0 && code != 1 && code != 2) {
        c.require(false, "fuzz case " + std::to_string(i) + " exit code " + std::to_string(code));
        return;
      }
    }
  }

  // A sample of the same corpus through the real process.
  for (int i = 0; i < 25; ++i) {
    std::string blob;
    const std::size_t len = rng.bounded(300);
    for (std::size_t k = 0; k < len; ++k) blob += static_cast<char>(rng.next() & 0xFF);
    test::write_file(fuzz_path, blob);
    const auto [code, err] = spawn_cli("check " + fuzz_path.string(), tmp.file("err.txt"));
    c.require(code == 0 || code == 1 || code == 2,
              "spawned fuzz case exits cleanly, got " + std::to_string(code));
  }
}

}  // namespace

int main() {
  std::cout << "acceptance suite (designs: " << kDesigns.string() << ")\n";

  criterion(1, "split-plot table (108 rows, balanced split-plot layout)", criterion_fisher);
  criterion(2, "complex nested factorial (216 rows, per-tier balance)", criterion_chicks);
  criterion(3, "unbalanced systematic factorial (129 rows, fixed mapping)", criterion_motion);
  criterion(4, "seeded determinism and seed sensitivity", criterion_determinism);
  criterion(5, "property suites (balance, round-trip, builder invariants, unservable)",
            criterion_properties);
  criterion(6, "parser diagnostics and fuzz robustness", criterion_diagnostics);

  if (g_criteria_failed != 0) {
    std::cout << g_criteria_failed << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
