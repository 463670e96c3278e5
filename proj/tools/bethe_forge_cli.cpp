#include <iostream>

#include <CLI11.hpp>

#include "bethe_forge/cli.hpp"
#include "bethe_forge/errors.hpp"

int main(int argc, char** argv) {
  using namespace bethe;
  CLI::App app{"Classify three-state Hamiltonians solvable by coordinate Bethe ansatz"};
  app.require_subcommand(1);

  RunConfig config;
  std::string m_range = "1..2";
  bool json = false;

  const auto add_common = [&](CLI::App* sub, bool chain) {
    sub->add_option("input", config.input, "Hamiltonian JSON file")->required();
    sub->add_option("--tol-constraint", config.tol_constraint, "Relative tolerance of the constraint test");
    sub->add_option("--seed", config.seed, "Seed for randomized tests");
    sub->add_flag("--json", json, "Emit a JSON report");
    if (!chain) return;
    sub->add_option("--L", config.length, "Chain length");
    sub->add_option("--M", m_range, "Excitation numbers, e.g. 1..3");
    sub->add_option("--tol-bae", config.tol_bae, "Bethe equation residual tolerance");
    sub->add_option("--tol-eig", config.tol_eig, "Relative eigenpair tolerance");
    sub->add_flag("--conjugate-vacuum", config.conjugate_vacuum, "Use |2...2> as the reference state");
  };
  auto* classify = app.add_subcommand("classify", "Solvability test, family and reduced Hamiltonian");
  add_common(classify, false);
  auto* spectrum = app.add_subcommand("spectrum", "Bethe solutions checked against exact diagonalization");
  add_common(spectrum, true);
  auto* verify = app.add_subcommand("verify", "Spectrum run with pass/fail checks");
  add_common(verify, true);
  auto* catalog = app.add_subcommand("catalog", "The ten families and their P/C/T actions");
  catalog->add_option("--seed", config.seed, "Seed for the sample points");
  catalog->add_flag("--json", json, "Emit a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  if (*classify) config.mode = Mode::Classify;
  if (*spectrum) config.mode = Mode::Spectrum;
  if (*verify) config.mode = Mode::Verify;
  if (*catalog) config.mode = Mode::Catalog;
  config.format = json ? Format::Json : Format::Text;
  try {
    std::tie(config.m_min, config.m_max) = parse_range(m_range);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  }
  return run(config, std::cout, std::cerr);
}
