#include <cstdio>
#include <regex>
#include <string>

#include <CLI11.hpp>

#include "fockbridge/experiment.hpp"
#include "fockbridge/symbolic.hpp"
#include "fockbridge/version.hpp"

namespace {

// The grammar names modes explicitly, so the mode count of a bare
// expression is just the largest bracketed index.
int infer_modes(const std::string& expr) {
  int modes = 1;
  const std::regex index(R"(\[(\d+)\])");
  for (auto it = std::sregex_iterator(expr.begin(), expr.end(), index);
       it != std::sregex_iterator(); ++it)
    modes = std::max(modes, std::stoi((*it)[1].str()));
  return modes;
}

int reduce(const std::string& expr) {
  try {
    const fockbridge::OperatorExpr in =
        fockbridge::parse_operator(expr, infer_modes(expr));
    std::printf("%s\n", fockbridge::rewrite_to_normal_form(in).str().c_str());
    return 0;
  } catch (const fockbridge::ParseError& err) {
    std::fprintf(stderr, "%s\n", err.what());
    return 2;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"truncated Fock space experiment runner"};
  app.require_subcommand(1);

  std::string config_path, suite_dir, expr, output;

  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("-o,--output", output, "output directory");

  CLI::App* suite =
      app.add_subcommand("suite", "run every config in a directory");
  suite->add_option("dir", suite_dir, "config directory")->required();
  suite->add_option("-o,--output", output, "output directory");

  CLI::App* red =
      app.add_subcommand("reduce", "print the canonical normal form");
  red->add_option("expr", expr, "operator expression")->required();

  app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    // CLI11's help path exits 0; everything else is a usage error.
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand("version")) {
    std::printf("fockbridge %s\n", fockbridge::version_string);
    return 0;
  }
  if (app.got_subcommand("reduce"))
    return reduce(expr);

  std::string error;
  int code = 0;
  if (app.got_subcommand("run")) {
    // An empty path defers resolution to the config's own output field.
    code = fockbridge::run_config_file(config_path, output, &error);
  } else {
    code = fockbridge::run_suite(suite_dir, output, &error);
  }
  if (!error.empty())
    std::fprintf(stderr, "%s\n", error.c_str());
  return code;
}
