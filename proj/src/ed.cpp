#include "bethe_forge/ed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "bethe_forge/errors.hpp"

namespace bethe {

MatrixXc sector_matrix(const HamiltonianParams& params, int length, int m) {
  const auto basis = sector_basis(ChainSpec{length}, m);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  if (dim > kMaxSectorDimension)
    throw ModeError("sector dimension " + std::to_string(dim) + " exceeds " +
                    std::to_string(kMaxSectorDimension));
  const Matrix9 h = two_site_matrix(params);

  std::vector<std::uint64_t> weight(length);
  weight[length - 1] = 1;
  for (int j = length - 2; j >= 0; --j) weight[j] = 3 * weight[j + 1];

  MatrixXc out = MatrixXc::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const std::uint64_t state = basis[col];
    const auto values = site_values(state, length);
    for (int j = 0; j < length; ++j) {
      const int k = (j + 1) % length;
      const int in = 3 * values[j] + values[k];
      for (int r = 0; r < 9; ++r) {
        const cplx amp = h(r, in);
        if (amp == 0.0) continue;
        const std::uint64_t target = state - values[j] * weight[j] - values[k] * weight[k] +
                                     (r / 3) * weight[j] + (r % 3) * weight[k];
        // Number conservation keeps the target inside the sector.
        const auto it = std::lower_bound(basis.begin(), basis.end(), target);
        out(it - basis.begin(), col) += amp;
      }
    }
  }
  return out;
}

SectorSpectrum sector_spectrum(const HamiltonianParams& params, int length, int m) {
  SectorSpectrum spectrum;
  spectrum.m = m;
  const MatrixXc h = sector_matrix(params, length, m);
  spectrum.dimension = static_cast<int>(h.rows());
  if (h.rows() == 0) return spectrum;
  Eigen::ComplexEigenSolver<MatrixXc> solver(h, false);
  if (solver.info() != Eigen::Success)
    throw Error("eigensolver failed for sector M = " + std::to_string(m) + " (L = " +
                std::to_string(length) + ")");
  const auto& values = solver.eigenvalues();
  spectrum.eigenvalues.assign(values.data(), values.data() + values.size());
  return spectrum;
}

std::vector<cplx> full_spectrum(const HamiltonianParams& params, int length) {
  const MatrixXc h = MatrixXc(chain_matrix(params, ChainSpec{length}));
  Eigen::ComplexEigenSolver<MatrixXc> solver(h, false);
  if (solver.info() != Eigen::Success) throw Error("eigensolver failed for the full chain");
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

double energy_scale(const HamiltonianParams& params) {
  const double scale = two_site_matrix(params).cwiseAbs().maxCoeff();
  return scale > 0.0 ? scale : 1.0;
}

SectorComparison compare(const std::vector<cplx>& cba_energies, const SectorSpectrum& ed, double tol,
                         double scale) {
  SectorComparison out;
  out.m = ed.m;
  out.dimension = ed.dimension;
  out.candidates = static_cast<int>(cba_energies.size());
  std::vector<bool> used(ed.eigenvalues.size(), false);
  for (cplx e : cba_energies) {
    std::size_t best = ed.eigenvalues.size();
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ed.eigenvalues.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(e - ed.eigenvalues[i]);
      if (d < best_distance) {
        best_distance = d;
        best = i;
      }
    }
    if (best < used.size() && best_distance <= tol * scale) {
      used[best] = true;
      ++out.matched;
    } else {
      out.unmatched.push_back(e);
    }
  }
  out.coverage = ed.dimension > 0 ? static_cast<double>(out.matched) / ed.dimension : 1.0;
  return out;
}

SectorComparison compare(const std::vector<BetheSolution>& cba, const SectorSpectrum& ed, double tol,
                         double scale) {
  std::vector<cplx> energies;
  energies.reserve(cba.size());
  for (const auto& s : cba) energies.push_back(s.energy);
  return compare(energies, ed, tol, scale);
}

bool same_spectrum(std::vector<cplx> a, std::vector<cplx> b, double tol) {
  if (a.size() != b.size()) return false;
  SectorSpectrum ed;
  ed.dimension = static_cast<int>(b.size());
  ed.eigenvalues = std::move(b);
  return compare(a, ed, tol).matched == static_cast<int>(a.size());
}

}  // namespace bethe
