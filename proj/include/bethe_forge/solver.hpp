#pragma once

// Bethe equations for small (L, M), energies, and explicit CBA eigenvectors.
//
// Positions are 1-based: x = 1 is the leftmost site, which carries the most
// significant trit of a basis-state index.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bethe_forge/constraints.hpp"
#include "bethe_forge/hamiltonian.hpp"

namespace bethe {

inline constexpr int kMaxExcitations = 3;

struct BetheSolution {
  std::vector<cplx> z;
  cplx energy;
  double bae_residual = 0.0;
  // Some pair of roots closer than SolverConfig::degenerate_threshold.
  bool degenerate = false;
};

struct SolverConfig {
  double bae_tolerance = 1e-10;
  double convergence = 1e-12;
  int max_iterations = 200;
  int random_seeds = 100;
  double dedup_tolerance = 1e-8;
  double degenerate_threshold = 1e-6;
  std::uint64_t seed = 0xb37e;
};

struct SolverDiagnostics {
  int seeds = 0;
  int converged = 0;
  int dropped = 0;   // Newton did not converge
  int rejected = 0;  // converged but failed the BAE residual or hit a pole
  bool trivial_s = false;
};

// M V + sum_n (q z_n + p / z_n). This is the eigenvalue relative to the
// pseudo-vacuum, which equals the chain eigenvalue when v00 = 0.
cplx energy(const HamiltonianParams& params, std::span<const cplx> z);

// max_j |z_j^L - prod_{n != j} S(z_n, z_j)|; +infinity at an S pole.
double bae_residual(const HamiltonianParams& params, std::span<const cplx> z, int length);

// S(z1, z2) = -1 identically (checked at a handful of random points).
bool has_trivial_s_matrix(const HamiltonianParams& params);

// Throws ModeError unless 1 <= M <= 3 and L <= L_max.
std::vector<BetheSolution> solve_bae(const HamiltonianParams& params, int length, int m,
                                     const SolverConfig& config = {},
                                     SolverDiagnostics* diagnostics = nullptr);

// Plane-wave amplitude a(x_1, ..., x_M) for sorted positions (a position may
// repeat once, meaning a doubly excited site).
cplx plane_wave_amplitude(const HamiltonianParams& params, std::span<const cplx> z,
                          std::span<const int> x);

struct SectorEigenvector {
  int m = 0;
  int length = 0;
  std::map<std::vector<int>, cplx> coords;
  double norm = 0.0;
  // Norm below 1e-10 of the largest plane-wave term.
  bool null = false;
};

SectorEigenvector assemble_eigenvector(const HamiltonianParams& params, std::span<const cplx> z,
                                       int length);

// Coordinates laid out along sector_basis(L, M).
VectorXc sector_vector(const SectorEigenvector& psi);

// Position tuple of a basis state, e.g. sites (0, 2, 1) -> (2, 2, 3).
std::vector<int> positions_of_state(std::uint64_t state, int length);

// ||H psi - E psi|| / ||psi|| for a sector matrix H. Throws on a zero vector.
double verify_eigenpair(const MatrixXc& sector_hamiltonian, const SectorEigenvector& psi, cplx e);

}  // namespace bethe
