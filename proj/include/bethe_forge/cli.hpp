#pragma once

// Front end shared by the command-line tool and the Python module. Each mode
// produces a JSON report; text output is rendered from the same report.

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bethe_forge/hamiltonian.hpp"

namespace bethe {

enum class Mode { Classify, Spectrum, Verify, Catalog };
enum class Format { Text, Json };

struct RunConfig {
  std::string input;
  Mode mode = Mode::Classify;
  int length = 4;
  int m_min = 1;
  int m_max = 2;
  double tol_constraint = 1e-9;
  double tol_bae = 1e-10;
  double tol_eig = 1e-8;
  std::uint64_t seed = 0x5eed;
  Format format = Format::Text;
  // Run on C(H): builds excitations over |2...2> instead of |0...0>.
  bool conjugate_vacuum = false;

  // Throws ModeError for L outside [2, L_max], an empty or negative M range,
  // or non-positive tolerances.
  void validate() const;
};

enum ExitCode : int { kOk = 0, kInternal = 1, kParse = 2, kGate = 3, kRefused = 4 };

// "a..b" or a single integer. Throws ParseError.
std::pair<int, int> parse_range(const std::string& text);

nlohmann::json run_classify(const HamiltonianParams& params, const RunConfig& config);
nlohmann::json run_spectrum(const HamiltonianParams& params, const RunConfig& config);
// Spectrum run plus pass/fail checks: every non-null Bethe vector is an
// eigenvector within tol_eig and its energy an ED eigenvalue; "passed" holds
// the verdict.
nlohmann::json run_verify(const HamiltonianParams& params, const RunConfig& config);
nlohmann::json run_catalog(const RunConfig& config);

std::string render_text(const nlohmann::json& report);

// Loads config.input where needed, runs the mode, writes the report to out
// and diagnostics to err, and maps errors to exit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace bethe
