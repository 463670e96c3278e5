// Reports cross the boundary as JSON text; the Python package decodes them.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bethe_forge/cli.hpp"
#include "bethe_forge/errors.hpp"
#include "bethe_forge/families.hpp"
#include "bethe_forge/io.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using nlohmann::json;

namespace {

bethe::HamiltonianParams load(const std::string& text) { return bethe::parse_hamiltonian(text); }

bethe::RunConfig chain_config(int length, int m_min, int m_max, double tol_constraint, double tol_bae,
                              double tol_eig, std::uint64_t seed, bool conjugate_vacuum) {
  bethe::RunConfig config;
  config.length = length;
  config.m_min = m_min;
  config.m_max = m_max;
  config.tol_constraint = tol_constraint;
  config.tol_bae = tol_bae;
  config.tol_eig = tol_eig;
  config.seed = seed;
  config.conjugate_vacuum = conjugate_vacuum;
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  auto base = py::register_exception<bethe::Error>(m, "Error");
  py::register_exception<bethe::ParseError>(m, "ParseError", base);
  py::register_exception<bethe::HypothesisError>(m, "HypothesisError", base);
  py::register_exception<bethe::ModeError>(m, "ModeError", base);
  py::register_exception<bethe::SingularError>(m, "SingularError", base);

  m.def(
      "classify",
      [](const std::string& h, double tol_constraint, std::uint64_t seed) {
        bethe::RunConfig config;
        config.tol_constraint = tol_constraint;
        config.seed = seed;
        return bethe::run_classify(load(h), config).dump();
      },
      "h"_a, "tol_constraint"_a = 1e-9, "seed"_a = 0x5eed);

  const auto chain_mode = [&m](const char* name, auto fn) {
    m.def(
        name,
        [fn](const std::string& h, int length, int m_min, int m_max, double tol_constraint, double tol_bae,
             double tol_eig, std::uint64_t seed, bool conjugate_vacuum) {
          return fn(load(h), chain_config(length, m_min, m_max, tol_constraint, tol_bae, tol_eig, seed,
                                          conjugate_vacuum))
              .dump();
        },
        "h"_a, "L"_a = 4, "m_min"_a = 1, "m_max"_a = 2, "tol_constraint"_a = 1e-9, "tol_bae"_a = 1e-10,
        "tol_eig"_a = 1e-8, "seed"_a = 0x5eed, "conjugate_vacuum"_a = false);
  };
  chain_mode("spectrum", &bethe::run_spectrum);
  chain_mode("verify", &bethe::run_verify);

  m.def(
      "catalog",
      [](std::uint64_t seed) {
        bethe::RunConfig config;
        config.seed = seed;
        return bethe::run_catalog(config).dump();
      },
      "seed"_a = 0x5eed);

  m.def("construct", [](const std::string& family, int branch, const std::string& free) {
    json j = {{"family", family}, {"branch", branch}, {"free", json::parse(free)}};
    return bethe::to_json(bethe::hamiltonian_from_json(j)).dump();
  });

  m.def("two_site_matrix", [](const std::string& h) { return bethe::MatrixXc(bethe::two_site_matrix(load(h))); });
}
