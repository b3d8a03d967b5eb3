// Command line front end. Subcommands cover running programs concretely,
// analyzing them abstractly, checking analysis output, and generating
// random test programs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "njs/concrete.hpp"
#include "njs/engine.hpp"
#include "njs/ir_text.hpp"
#include "njs/ir_validate.hpp"
#include "njs/strategies.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

njs::ir::Program load_program(const std::string& path) {
  njs::ir::Program p = njs::ir::parse_program(slurp(path));
  auto diags = njs::ir::validate(p);
  if (!diags.empty()) {
    std::ostringstream ss;
    ss << path << ": " << diags.front().message;
    throw std::runtime_error(ss.str());
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"notjs static analyzer"};
  app.require_subcommand(1);

  std::string file, sensitivity = "fs";

  auto* run = app.add_subcommand("run", "execute a program concretely");
  run->add_option("file", file)->required();

  auto* analyze = app.add_subcommand("analyze", "analyze a program");
  analyze->add_option("file", file)->required();
  analyze->add_option("--sensitivity", sensitivity);

  auto* check = app.add_subcommand("check", "parse and validate a program");
  check->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    if (run->parsed()) {
      njs::ir::Program p = load_program(file);
      auto r = njs::concrete::run_program(p);
      std::cout << r.output;
      return r.kind == njs::concrete::ResultKind::Value ? 0 : 1;
    }
    if (analyze->parsed()) {
      njs::ir::Program p = load_program(file);
      auto r = njs::engine::analyze(p, njs::strat::make_strategy(sensitivity));
      std::cout << "partitions " << r.stats.partitions << "\n";
      return r.complete ? 0 : 1;
    }
    if (check->parsed()) {
      load_program(file);
      std::cout << "ok\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
