#include "bethe_forge/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "bethe_forge/constraints.hpp"
#include "bethe_forge/ed.hpp"
#include "bethe_forge/errors.hpp"
#include "bethe_forge/families.hpp"
#include "bethe_forge/io.hpp"
#include "bethe_forge/solver.hpp"

namespace bethe {

using nlohmann::json;

void RunConfig::validate() const {
  if (length < 2 || length > ChainSpec::max_length())
    throw ModeError("L = " + std::to_string(length) + " outside [2, " + std::to_string(ChainSpec::max_length()) +
                    "]");
  if (m_min < 1 || m_max < m_min) throw ModeError("empty or invalid M range");
  if (m_max > kMaxExcitations) throw ModeError("M ≤ 3 supported (got M = " + std::to_string(m_max) + ")");
  if (!(tol_constraint > 0.0 && tol_bae > 0.0 && tol_eig > 0.0)) throw ModeError("tolerances must be positive");
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto to_int = [&](const std::string& piece) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != piece.size()) throw ParseError("bad M range '" + text + "'");
    return value;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int m = to_int(text);
    return {m, m};
  }
  return {to_int(text.substr(0, dots)), to_int(text.substr(dots + 2))};
}

namespace {

// ---- report building ----

json invariants_json(const HamiltonianParams& h) {
  const auto inv = invariants(h);
  return {{"V", to_json(inv.V)},     {"X11", to_json(inv.X11)}, {"Y", to_json(inv.Y)},
          {"X12", to_json(inv.X12)}, {"X21", to_json(inv.X21)}, {"X22", to_json(inv.X22)}};
}

json verdict_json(const SolvabilityVerdict& v) {
  return {{"solvable", v.solvable},
          {"max_residual", v.max_residual},
          {"samples", v.samples},
          {"failing_constraint", v.failing_constraint ? json(to_string(*v.failing_constraint)) : json(nullptr)},
          {"frame", v.frame}};
}

// Only the parameters the family's reduced Hamiltonian depends on.
json reduced_json(const ReducedParams& r, const FamilyMatch& match) {
  json out = json::object();
  const auto names = physical_parameter_names(match.tag.family);
  const auto wanted = [&](const std::string& name) { return std::find(names.begin(), names.end(), name) != names.end(); };
  const auto put = [&](const char* name, const std::optional<cplx>& value) {
    if (value && wanted(name)) out[name] = to_json(*value);
  };
  if (wanted("v")) out["v"] = to_json(match.free_params.at("v"));
  if (wanted("xi")) out["xi"] = to_json(match.free_params.at("X22") / match.free_params.at("p"));
  put("tau_p", r.tau_p);
  put("tau_2", r.tau_2);
  put("tau_3", r.tau_3);
  put("theta", r.theta);
  put("upsilon", r.upsilon);
  put("sigma", r.sigma);
  put("mu", r.mu);
  return out;
}

json free_json(const FreeParams& free) {
  json out = json::object();
  for (const auto& [name, value] : free) out[name] = to_json(value);
  return out;
}

json match_json(const FamilyMatch& m) {
  return {{"tag", to_string(m.tag)},
          {"family", to_string(m.tag.family)},
          {"branch", m.tag.branch},
          {"frame", m.frame.word()},
          {"free_params", free_json(m.free_params)},
          {"fit_residual", m.fit_residual}};
}

ClassifyOptions classify_options(const RunConfig& config) {
  ClassifyOptions options;
  options.tolerance = config.tol_constraint;
  options.solvability.tolerance = config.tol_constraint;
  options.solvability.seed = config.seed;
  return options;
}

std::vector<std::pair<double, double>> sorted_pairs(const std::vector<cplx>& values) {
  std::vector<std::pair<double, double>> out;
  for (cplx v : values) out.emplace_back(v.real(), v.imag());
  std::sort(out.begin(), out.end());
  return out;
}

json energies_json(const std::vector<cplx>& values) {
  json out = json::array();
  for (const auto& [re, im] : sorted_pairs(values)) out.push_back(json::array({re, im}));
  return out;
}

// Describes the image of a family member under a symmetry in catalog
// notation: "gIK|u+ <-> u-", "T(17V1a)", "C(SB5) = T(SB5)|J <-> J^2".
std::string describe_image(const FamilyTag& tag, const Classification& image) {
  const auto name = [&](const FamilyMatch& m) {
    std::string base = to_string(m.tag.family);
    if (!m.frame.word().empty()) base = m.frame.word() + "(" + base + ")";
    if (m.tag.branch != tag.branch) {
      const std::string b = branch_name(tag.family);
      if (b == "u") base += "|u+ <-> u-";
      else if (b == "J") base += "|J <-> J^2";
      else if (b == "I") base += "|I <-> -I";
      else base += "|eps <-> -eps";
    }
    return base;
  };
  std::vector<std::string> readings;
  for (const auto& m : image.all_matches)
    if (m.tag.family == tag.family && m.frame.word().empty()) readings.push_back(name(m));
  if (readings.empty())
    for (const auto& m : image.all_matches)
      if (m.tag.family == tag.family && m.frame.word().size() == 1) readings.push_back(name(m));
  if (readings.empty()) return "unclassified";
  // Same-branch readings first.
  std::stable_sort(readings.begin(), readings.end(),
                   [](const std::string& a, const std::string& b) {
                     return a.find('|') == std::string::npos && b.find('|') != std::string::npos;
                   });
  readings.erase(std::unique(readings.begin(), readings.end()), readings.end());
  std::string out;
  for (const auto& r : readings) out += (out.empty() ? "" : " = ") + r;
  return out;
}

// ---- text rendering ----

cplx cplx_of(const json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

std::string fmt_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fmt_cplx(cplx z) {
  const double re = std::abs(z.real()) < 1e-14 ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 1e-14 ? 0.0 : z.imag();
  if (im == 0.0) return fmt_num(re);
  if (re == 0.0) return fmt_num(im) + "i";
  return fmt_num(re) + (im < 0 ? "-" : "+") + fmt_num(std::abs(im)) + "i";
}

std::string fmt_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string render_named(const json& object) {
  std::string out;
  for (const auto& [key, value] : object.items()) out += (out.empty() ? "" : ", ") + key + " = " + fmt_cplx(cplx_of(value));
  return out;
}

// Rows |00>..|22> against columns |00>..|22>, as in the two-site layout.
std::string render_matrix(const json& m) {
  std::vector<std::vector<std::string>> cells(9, std::vector<std::string>(9));
  std::size_t width = 1;
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) {
      cells[r][c] = fmt_cplx(cplx_of(m[r][c]));
      width = std::max(width, cells[r][c].size());
    }
  std::string out;
  for (int r = 0; r < 9; ++r) {
    out += "  ";
    for (int c = 0; c < 9; ++c) {
      out += std::string(width - cells[r][c].size() + (c ? 2 : 0), ' ') + cells[r][c];
    }
    out += "\n";
  }
  return out;
}

std::string render_verdict(const json& v) {
  std::string frame = v["frame"].get<std::string>();
  std::string out = std::string("solvable: ") + (v["solvable"].get<bool>() ? "yes" : "no") + " (max residual " +
                    fmt_sci(v["max_residual"].get<double>()) + " over " + std::to_string(v["samples"].get<int>()) +
                    " samples";
  if (!v["failing_constraint"].is_null()) out += ", failing " + v["failing_constraint"].get<std::string>();
  if (!frame.empty()) out += ", tested in frame " + frame;
  return out + ")\n";
}

std::string render_classify(const json& r) {
  std::string out = render_verdict(r["verdict"]);
  out += "invariants: " + render_named(r["invariants"]) + "\n";
  out += "classification: " + r["classification"].get<std::string>() + "\n";
  if (r["match"].is_null()) return out;
  const json& m = r["match"];
  const std::string frame = m["frame"].get<std::string>();
  out += "family: " + m["tag"].get<std::string>() + " (frame " + (frame.empty() ? "identity" : frame) +
         ", fit residual " + fmt_sci(m["fit_residual"].get<double>()) + ")\n";
  out += "free parameters: " + render_named(m["free_params"]) + "\n";
  if (r["degenerate"].get<bool>()) {
    out += "also matches:";
    for (const auto& other : r["all_matches"]) out += " " + other["tag"].get<std::string>() + "@" + other["frame"].get<std::string>();
    out += "\n";
  }
  const json& red = r["reduction"];
  if (red.contains("error")) return out + "reduction: " + red["error"].get<std::string>() + "\n";
  out += "reduced parameters: " + render_named(red["reduced_parameters"]) + "\n";
  out += "normalization N0 = " + fmt_cplx(cplx_of(red["normalization"])) + ", gauge G = diag(" +
         fmt_cplx(cplx_of(red["gauge"][0])) + ", " + fmt_cplx(cplx_of(red["gauge"][1])) + ", " +
         fmt_cplx(cplx_of(red["gauge"][2])) + ")\n";
  out += "reduced Hamiltonian:\n" + render_matrix(red["matrix"]);
  return out;
}

std::string render_spectrum(const json& r) {
  std::string out = render_verdict(r["verdict"]);
  out += "family: " + r["family"].get<std::string>() + ", L = " + std::to_string(r["L"].get<int>());
  if (r["conjugate_vacuum"].get<bool>()) out += ", conjugate vacuum";
  out += "\n";
  for (const auto& sector : r["sectors"]) {
    out += "M = " + std::to_string(sector["M"].get<int>()) + ": " + std::to_string(sector["solutions"].size()) +
           " Bethe solutions, " + std::to_string(sector["verified"].get<int>()) + " verified eigenpairs, coverage " +
           std::to_string(sector["verified"].get<int>()) + "/" + std::to_string(sector["dimension"].get<int>()) + "\n";
    for (const auto& s : sector["solutions"]) {
      std::string roots;
      for (const auto& z : s["z"]) roots += (roots.empty() ? "" : ", ") + fmt_cplx(cplx_of(z));
      out += "  E = " + fmt_cplx(cplx_of(s["energy"])) + "  z = (" + roots + ")  bae " +
             fmt_sci(s["bae_residual"].get<double>());
      if (s["null"].get<bool>()) out += "  null vector";
      else out += "  eig " + fmt_sci(s["eigen_residual"].get<double>()) + (s["matched"].get<bool>() ? "  ED ok" : "  ED unmatched");
      if (s["degenerate"].get<bool>()) out += "  coincident roots";
      out += "\n";
    }
  }
  if (r.contains("passed")) {
    for (const auto& c : r["checks"]) out += std::string(c["passed"].get<bool>() ? "ok   " : "FAIL ") + c["name"].get<std::string>() + ": " + c["detail"].get<std::string>() + "\n";
    out += std::string("verification ") + (r["passed"].get<bool>() ? "passed" : "FAILED") + "\n";
  }
  return out;
}

std::string render_catalog(const json& r) {
  std::string out = "Model    vertices  P action                  C action                            T action                    Invariances\n";
  const auto pad = [](std::string s, std::size_t n) { return s.size() >= n ? s + " " : s + std::string(n - s.size(), ' '); };
  for (const auto& f : r["families"]) {
    std::string inv;
    for (const auto& w : f["invariances"]) inv += (inv.empty() ? "" : ", ") + w.get<std::string>();
    out += pad(f["name"].get<std::string>(), 9) + pad(std::to_string(f["vertices"].get<int>()), 10) +
           pad(f["actions"]["P"].get<std::string>(), 26) + pad(f["actions"]["C"].get<std::string>(), 36) +
           pad(f["actions"]["T"].get<std::string>(), 28) + (inv.empty() ? "-" : inv) + "\n";
  }
  out += "\n";
  for (const auto& f : r["families"]) {
    std::string names, physical;
    for (const auto& n : f["free_parameters"]) names += (names.empty() ? "" : " ") + n.get<std::string>();
    for (const auto& n : f["reduced_parameters"]) physical += (physical.empty() ? "" : " ") + n.get<std::string>();
    out += f["name"].get<std::string>() + "\n";
    out += "  free: " + names + (f["branch"].get<std::string>().empty() ? "" : "  branch: " + f["branch"].get<std::string>()) + "\n";
    out += "  reduced: " + physical + "\n";
    out += "  S = " + f["s_matrix"].get<std::string>() + "\n";
    out += "  N = " + f["n_factor"].get<std::string>() + "\n";
  }
  return out;
}

}  // namespace

json run_classify(const HamiltonianParams& params, const RunConfig& config) {
  const auto c = classify(params, classify_options(config));
  json r = {{"mode", "classify"}, {"input", to_json(params)}, {"verdict", verdict_json(c.verdict)},
            {"invariants", invariants_json(params)}, {"degenerate", c.degenerate}};
  r["classification"] = !c.verdict.solvable ? "not CBA-solvable" : c.match ? to_string(c.match->tag) : "unclassified";
  r["match"] = c.match ? match_json(*c.match) : json(nullptr);
  r["all_matches"] = json::array();
  for (const auto& m : c.all_matches) r["all_matches"].push_back({{"tag", to_string(m.tag)}, {"frame", m.frame.word()}});
  if (c.match) {
    try {
      const auto red = reduce_hamiltonian(params, *c.match);
      r["reduction"] = {{"reduced_parameters", reduced_json(red.reduced, *c.match)},
                        {"normalization", to_json(red.normalization)},
                        {"gauge", json::array({to_json(red.gauge[0]), to_json(red.gauge[1]), to_json(red.gauge[2])})},
                        {"matrix", to_json(red.matrix)}};
    } catch (const SingularError& e) {
      r["reduction"] = {{"error", e.what()}};
    }
  }
  return r;
}

json run_spectrum(const HamiltonianParams& params, const RunConfig& config) {
  config.validate();
  HamiltonianParams h = config.conjugate_vacuum ? apply_charge_conjugation(params) : params;
  const auto options = classify_options(config);
  const auto c = classify(h, options);
  if (!c.verdict.solvable)
    throw ModeError("input is not CBA-solvable (max residual " + fmt_sci(c.verdict.max_residual) +
                    "); spectrum mode refused");
  // Excitations are built in the frame where the constraints were tested.
  h = canonicalize(apply_frame(h, Frame::from_word(c.verdict.frame)));

  json r = {{"mode", "spectrum"},
            {"verdict", verdict_json(c.verdict)},
            {"family", c.match ? to_string(c.match->tag) : "unclassified"},
            {"L", config.length},
            {"conjugate_vacuum", config.conjugate_vacuum},
            {"energy_scale", energy_scale(h)}};
  SolverConfig solver;
  solver.bae_tolerance = config.tol_bae;
  solver.seed = config.seed;
  const double scale = energy_scale(h);
  r["sectors"] = json::array();
  for (int m = config.m_min; m <= config.m_max; ++m) {
    SolverDiagnostics diag;
    const auto solutions = solve_bae(h, config.length, m, solver, &diag);
    const MatrixXc sector = sector_matrix(h, config.length, m);
    const auto ed = sector_spectrum(h, config.length, m);
    json list = json::array();
    std::vector<cplx> verified;
    for (const auto& s : solutions) {
      json item = {{"z", json::array()}, {"energy", to_json(s.energy)}, {"bae_residual", s.bae_residual},
                   {"degenerate", s.degenerate}};
      for (cplx z : s.z) item["z"].push_back(to_json(z));
      SectorEigenvector psi;
      bool null = true;
      try {
        psi = assemble_eigenvector(h, s.z, config.length);
        null = psi.null;
      } catch (const SingularError&) {
        null = true;
      }
      item["null"] = null;
      if (!null) {
        const double residual = verify_eigenpair(sector, psi, s.energy) / scale;
        const bool matched = compare(std::vector<cplx>{s.energy}, ed, config.tol_eig, scale).matched == 1;
        item["eigen_residual"] = residual;
        item["matched"] = matched;
        if (residual <= config.tol_eig && matched) verified.push_back(s.energy);
      }
      list.push_back(item);
    }
    const auto comparison = compare(verified, ed, config.tol_eig, scale);
    r["sectors"].push_back({{"M", m},
                            {"dimension", ed.dimension},
                            {"solutions", list},
                            {"verified", comparison.matched},
                            {"coverage", static_cast<double>(comparison.matched) / ed.dimension},
                            {"trivial_s", diag.trivial_s},
                            {"diagnostics",
                             {{"seeds", diag.seeds}, {"converged", diag.converged}, {"dropped", diag.dropped},
                              {"rejected", diag.rejected}}},
                            {"ed_eigenvalues", energies_json(ed.eigenvalues)}});
  }
  return r;
}

json run_verify(const HamiltonianParams& params, const RunConfig& config) {
  json r = run_spectrum(params, config);
  r["mode"] = "verify";
  json checks = json::array();
  bool passed = true;
  for (const auto& sector : r["sectors"]) {
    int bad = 0, checked = 0;
    for (const auto& s : sector["solutions"]) {
      if (s["null"].get<bool>()) continue;
      ++checked;
      if (s["eigen_residual"].get<double>() > config.tol_eig || !s["matched"].get<bool>()) ++bad;
    }
    const bool ok = bad == 0 && checked > 0;
    passed &= ok;
    checks.push_back({{"name", "M=" + std::to_string(sector["M"].get<int>()) + " eigenpairs"},
                      {"passed", ok},
                      {"detail", std::to_string(checked - bad) + "/" + std::to_string(checked) +
                                     " non-null Bethe vectors verified against ED"}});
  }
  r["checks"] = checks;
  r["passed"] = passed;
  return r;
}

json run_catalog(const RunConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> mag(0.5, 1.5), angle(0.0, 2.0 * M_PI);
  json families = json::array();
  for (Family family : kAllFamilies) {
    const FamilyTag tag{family, has_branch(family) ? 1 : 0};
    FreeParams free;
    for (const auto& name : free_parameter_names(family)) free[name] = std::polar(mag(rng), angle(rng));
    const auto h = construct(tag, free);
    json actions = json::object();
    for (const char* word : {"P", "C", "T"})
      actions[word] = describe_image(tag, classify(apply_frame(h, Frame::from_word(word))));
    json invariances = json::array();
    for (const Frame& frame : all_frames()) {
      if (frame.word().empty()) continue;
      const auto image = classify(apply_frame(h, frame));
      const bool same = std::any_of(image.all_matches.begin(), image.all_matches.end(),
                                    [&](const FamilyMatch& m) { return m.tag == tag && m.frame.word().empty(); });
      if (same) invariances.push_back(frame.word());
    }
    // Report only the generators: drop words that are products of listed ones.
    json minimal = json::array();
    std::set<std::string> listed;
    for (const auto& w : invariances) listed.insert(w.get<std::string>());
    for (const auto& w : invariances) {
      const std::string word = w.get<std::string>();
      bool product = false;
      for (std::size_t i = 1; i < word.size() && !product; ++i)
        product = listed.count(word.substr(0, i)) && listed.count(word.substr(i));
      if (!product) minimal.push_back(word);
    }
    json example = to_json(h);
    example["name"] = to_string(tag) + " example";
    families.push_back({{"name", to_string(family)},
                        {"vertices", vertex_count(family)},
                        {"branch", branch_name(family)},
                        {"free_parameters", free_parameter_names(family)},
                        {"reduced_parameters", physical_parameter_names(family)},
                        {"s_matrix", family_s_formula(family)},
                        {"n_factor", family_n_formula(family)},
                        {"actions", actions},
                        {"invariances", minimal},
                        {"example", example}});
  }
  return {{"mode", "catalog"}, {"seed", config.seed}, {"families", families}};
}

std::string render_text(const json& report) {
  const std::string mode = report.at("mode").get<std::string>();
  if (mode == "classify") return render_classify(report);
  if (mode == "catalog") return render_catalog(report);
  return render_spectrum(report);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    json report;
    if (config.mode == Mode::Catalog) {
      report = run_catalog(config);
    } else {
      const auto params = load_hamiltonian(config.input);
      switch (config.mode) {
        case Mode::Classify: report = run_classify(params, config); break;
        case Mode::Spectrum: report = run_spectrum(params, config); break;
        case Mode::Verify: report = run_verify(params, config); break;
        case Mode::Catalog: break;
      }
    }
    if (config.format == Format::Json) out << report.dump(2) << "\n";
    else out << render_text(report);
    if (config.mode == Mode::Verify && !report["passed"].get<bool>()) return kInternal;
    return kOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const HypothesisError& e) {
    err << "hypothesis gate: " << e.what() << "\n";
    return kGate;
  } catch (const ModeError& e) {
    err << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace bethe
