#include "ged/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ged/command.hpp"
#include "ged/csv.hpp"
#include "ged/dot.hpp"
#include "ged/parser.hpp"
#include "ged/table.hpp"

namespace ged::cli {

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return false;
  out = ss.str();
  return true;
}

int write_output(const std::optional<std::string>& path, const std::string& data) {
  if (!path) {
    std::cout << data;
    std::cout.flush();
    return 0;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) {
    std::cerr << "ged: cannot write '" << *path << "'\n";
    return 2;
  }
  out << data;
  out.flush();
  if (!out.good()) {
    std::cerr << "ged: failed while writing '" << *path << "'\n";
    return 2;
  }
  return 0;
}

int dispatch(const CliConfig& cfg) {
  std::string source;
  if (!read_file(cfg.input_path, source)) {
    std::cerr << "ged: cannot open '" << cfg.input_path << "'\n";
    return 2;
  }

  auto parsed = parse(source);
  if (!parsed.ok()) {
    std::cerr << cfg.input_path << ":" << parsed.error->render() << "\n";
    return 1;
  }
  DesignSpec spec = std::move(*parsed.value);
  if (cfg.command == CliCommand::Serve && cfg.seed_override && spec.assign_decl) {
    spec.assign_decl->seed = *cfg.seed_override;
  }

  try {
    const Design design = build(spec);
    switch (cfg.command) {
      case CliCommand::Check: {
        const auto violations = validate(design);
        for (const Violation& v : violations) {
          std::cerr << cfg.input_path << ": [" << v.rule << "] " << v.message << "\n";
        }
        return violations.empty() ? 0 : 1;
      }
      case CliCommand::Serve:
        return write_output(cfg.output_path, to_csv(serve_table(design)));
      case CliCommand::Graph:
        return write_output(cfg.output_path, cfg.graph_kind == GraphKind::Factor
                                                 ? factor_graph_dot(design)
                                                 : level_graph_dot(design));
    }
    return 0;
  } catch (const UnservableError& e) {
    std::cerr << cfg.input_path << ": error: " << e.what() << "\n";
    return 1;
  } catch (const DesignError& e) {
    std::cerr << cfg.input_path << ": error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ged: internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CliConfig cfg;
  std::string kind = "factor";

  CLI::App app{"declarative experimental design tables"};
  app.name("ged");
  app.require_subcommand(1);

  CLI::App* serve = app.add_subcommand("serve", "build, assign and write the design table (CSV)");
  serve->add_option("file", cfg.input_path, "design program (.ged)")->required();
  serve->add_option("--seed", cfg.seed_override,
                    "override the seed of the file's assign clause");
  serve->add_option("-o,--output", cfg.output_path, "output path (default: stdout)");

  CLI::App* check = app.add_subcommand("check", "parse and validate a design program");
  check->add_option("file", cfg.input_path, "design program (.ged)")->required();

  CLI::App* graph = app.add_subcommand("graph", "write a Graphviz DOT rendering");
  graph->add_option("file", cfg.input_path, "design program (.ged)")->required();
  graph->add_option("--kind", kind, "which graph to render")
      ->check(CLI::IsMember({"factor", "level"}));
  graph->add_option("-o,--output", cfg.output_path, "output path (default: stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("ged");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (serve->parsed()) {
    cfg.command = CliCommand::Serve;
    cfg.format = OutputFormat::Csv;
  } else if (check->parsed()) {
    cfg.command = CliCommand::Check;
  } else if (graph->parsed()) {
    cfg.command = CliCommand::Graph;
    cfg.format = OutputFormat::Dot;
    cfg.graph_kind = kind == "level" ? GraphKind::Level : GraphKind::Factor;
  }

  try {
    return dispatch(cfg);
  } catch (...) {
    std::cerr << "ged: internal error\n";
    return 1;
  }
}

}  // namespace ged::cli
