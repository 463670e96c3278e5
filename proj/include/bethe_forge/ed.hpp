#pragma once

// Exact diagonalization of the periodic chain, sector by sector, used as
// the reference against which Bethe ansatz energies are checked.

#include <string>
#include <vector>

#include "bethe_forge/hamiltonian.hpp"
#include "bethe_forge/solver.hpp"

namespace bethe {

// Sectors larger than this are refused.
inline constexpr int kMaxSectorDimension = 20000;

// Restriction of the chain Hamiltonian to sector_basis(L, M), dense.
MatrixXc sector_matrix(const HamiltonianParams& params, int length, int m);

struct SectorSpectrum {
  int m = 0;
  int dimension = 0;
  std::vector<cplx> eigenvalues;
};

// All eigenvalues of sector_matrix (general complex eigensolver).
SectorSpectrum sector_spectrum(const HamiltonianParams& params, int length, int m);

// All eigenvalues of the full 3^L x 3^L chain matrix. Intended for small L.
std::vector<cplx> full_spectrum(const HamiltonianParams& params, int length);

// Largest entry magnitude of the two-site matrix; energies are compared
// after dividing by it.
double energy_scale(const HamiltonianParams& params);

struct SectorComparison {
  int m = 0;
  int dimension = 0;
  int candidates = 0;
  int matched = 0;
  std::vector<cplx> unmatched;
  double coverage = 0.0;
};

// Greedy nearest-eigenvalue matching, each ED eigenvalue used at most once.
// |E_cba - E_ed| / scale <= tol counts as a match.
SectorComparison compare(const std::vector<cplx>& cba_energies, const SectorSpectrum& ed, double tol,
                         double scale = 1.0);
SectorComparison compare(const std::vector<BetheSolution>& cba, const SectorSpectrum& ed, double tol,
                         double scale = 1.0);

// Whether two eigenvalue lists agree as multisets (greedy matching).
bool same_spectrum(std::vector<cplx> a, std::vector<cplx> b, double tol);

}  // namespace bethe
