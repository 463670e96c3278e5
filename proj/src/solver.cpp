#include "bethe_forge/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <tuple>

#include <Eigen/LU>

#include "bethe_forge/errors.hpp"

namespace bethe {

namespace {

cplx ipow(cplx z, int n) {
  cplx result = 1.0;
  for (int i = 0; i < n; ++i) result *= z;
  return result;
}

void check_momenta(std::span<const cplx> z) {
  for (cplx zn : z)
    if (zn == 0.0) throw SingularError("invalid momentum: z = 0");
}

}  // namespace

cplx energy(const HamiltonianParams& params, std::span<const cplx> z) {
  check_momenta(z);
  const cplx v = invariants(params).V;
  cplx e = static_cast<double>(z.size()) * v;
  for (cplx zn : z) e += params.q * zn + params.p / zn;
  return e;
}

double bae_residual(const HamiltonianParams& params, std::span<const cplx> z, int length) {
  check_momenta(z);
  const ScatteringKernel kernel(params);
  double worst = 0.0;
  try {
    for (std::size_t j = 0; j < z.size(); ++j) {
      cplx rhs = 1.0;
      for (std::size_t n = 0; n < z.size(); ++n)
        if (n != j) rhs *= kernel.s_matrix(z[n], z[j]);
      worst = std::max(worst, std::abs(ipow(z[j], length) - rhs));
    }
  } catch (const SingularError&) {
    return std::numeric_limits<double>::infinity();
  }
  return std::isnan(worst) ? std::numeric_limits<double>::infinity() : worst;
}

bool has_trivial_s_matrix(const HamiltonianParams& params) {
  const ScatteringKernel kernel(params);
  std::mt19937_64 rng(0x7215);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI), radius(0.6, 1.7);
  int checked = 0;
  for (int attempt = 0; attempt < 50 && checked < 6; ++attempt) {
    const cplx z1 = std::polar(radius(rng), angle(rng)), z2 = std::polar(radius(rng), angle(rng));
    const cplx l12 = kernel.lambda(z1, z2), l21 = kernel.lambda(z2, z1);
    const double scale = kernel.lambda_scale(z1, z2) + kernel.lambda_scale(z2, z1);
    if (scale == 0.0) continue;
    // S = -1 means Lambda is symmetric.
    if (std::abs(l12 - l21) > 1e-12 * scale) return false;
    ++checked;
  }
  return checked > 0;
}

namespace {

// Denominator-cleared Bethe equations
//   F_j = z_j^L prod_{n != j} Lambda(z_j, z_n) - (-1)^{M-1} prod_{n != j} Lambda(z_n, z_j)
// together with their Jacobian and a relative size.
struct Residual {
  Eigen::VectorXcd f;
  Eigen::MatrixXcd jacobian;
  double relative = 0.0;
};

Residual evaluate(const ScatteringKernel& kernel, const Eigen::VectorXcd& z, int length,
                  bool with_jacobian) {
  const int m = static_cast<int>(z.size());
  const double sign = (m - 1) % 2 == 0 ? 1.0 : -1.0;
  Residual r;
  r.f.resize(m);
  if (with_jacobian) r.jacobian = Eigen::MatrixXcd::Zero(m, m);

  Eigen::MatrixXcd lam(m, m), grad_a(m, m), grad_b(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;
      lam(a, b) = kernel.lambda(z[a], z[b]);
      if (with_jacobian) std::tie(grad_a(a, b), grad_b(a, b)) = kernel.lambda_gradient(z[a], z[b]);
    }

  for (int j = 0; j < m; ++j) {
    const cplx power = ipow(z[j], length);
    cplx g = power, k = sign;
    for (int n = 0; n < m; ++n) {
      if (n == j) continue;
      g *= lam(j, n);
      k *= lam(n, j);
    }
    r.f[j] = g - k;
    const double size = std::abs(g) + std::abs(k);
    r.relative = std::max(r.relative, size > 0.0 ? std::abs(r.f[j]) / size : std::abs(r.f[j]));
    if (!with_jacobian) continue;

    // Product rule, one Lambda factor differentiated at a time.
    const auto others = [&](int skip, bool forward) {
      cplx prod = 1.0;
      for (int n = 0; n < m; ++n)
        if (n != j && n != skip) prod *= forward ? lam(j, n) : lam(n, j);
      return prod;
    };
    cplx djj = static_cast<double>(length) * ipow(z[j], length - 1) * others(-1, true);
    for (int n = 0; n < m; ++n) {
      if (n == j) continue;
      djj += power * grad_a(j, n) * others(n, true);
      djj -= sign * grad_b(n, j) * others(n, false);
      r.jacobian(j, n) = power * grad_b(j, n) * others(n, true) - sign * grad_a(n, j) * others(n, false);
    }
    r.jacobian(j, j) = djj;
  }
  return r;
}

std::optional<Eigen::VectorXcd> newton(const ScatteringKernel& kernel, Eigen::VectorXcd z, int length,
                                       const SolverConfig& config) {
  Residual current = evaluate(kernel, z, length, true);
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    if (current.relative <= config.convergence) return z;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(current.jacobian);
    if (lu.rank() < z.size()) return std::nullopt;
    const Eigen::VectorXcd step = lu.solve(current.f);
    if (!step.allFinite()) return std::nullopt;

    double damping = 1.0;
    Eigen::VectorXcd trial;
    Residual next;
    for (int halving = 0; halving < 12; ++halving) {
      trial = z - damping * step;
      next = evaluate(kernel, trial, length, true);
      if (next.relative < current.relative) break;
      damping *= 0.5;
    }
    if (!trial.allFinite()) return std::nullopt;
    const double move = step.cwiseAbs().maxCoeff() * damping;
    z = trial;
    current = next;
    if (move <= 1e-15 * std::max(1.0, z.cwiseAbs().maxCoeff())) break;
  }
  if (current.relative <= config.convergence) return z;
  return std::nullopt;
}

bool same_multiset(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol) {
  std::vector<bool> used(b.size(), false);
  for (cplx za : a) {
    bool found = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!used[i] && std::abs(za - b[i]) <= tol * std::max(1.0, std::abs(za))) {
        used[i] = found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Lexicographic order on (real, imag) so that solution lists are reproducible.
void sort_roots(std::vector<cplx>& z) {
  std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
    if (std::abs(a.real() - b.real()) > 1e-12) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

std::vector<cplx> free_roots(int length, int m) {
  // Solutions of z^L = (-1)^{M-1}.
  const double shift = (m - 1) % 2 == 0 ? 0.0 : 1.0;
  std::vector<cplx> roots(length);
  for (int k = 0; k < length; ++k) roots[k] = std::polar(1.0, M_PI * (2.0 * k + shift) / length);
  return roots;
}

// Calls f for every non-decreasing index tuple of size m from {0, ..., n-1}
// (strictly increasing when `distinct`).
template <typename F>
void for_each_multiset(int n, int m, bool distinct, F&& f) {
  std::vector<int> idx(m);
  const auto recurse = [&](auto&& self, int pos, int start) -> void {
    if (pos == m) {
      f(idx);
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[pos] = i;
      self(self, pos + 1, distinct ? i + 1 : i);
    }
  };
  recurse(recurse, 0, 0);
}

}  // namespace

std::vector<BetheSolution> solve_bae(const HamiltonianParams& params, int length, int m,
                                     const SolverConfig& config, SolverDiagnostics* diagnostics) {
  if (m < 1 || m > kMaxExcitations) throw ModeError("M ≤ 3 supported (got M = " + std::to_string(m) + ")");
  if (length < 2 || length > ChainSpec::max_length())
    throw ModeError("chain too large: L = " + std::to_string(length) + " exceeds L_max = " +
                    std::to_string(ChainSpec::max_length()));
  SolverDiagnostics diag;
  std::vector<BetheSolution> solutions;

  const auto finish = [&](std::vector<cplx> z) {
    sort_roots(z);
    BetheSolution s;
    s.bae_residual = bae_residual(params, z, length);
    if (!(s.bae_residual <= config.bae_tolerance)) {
      ++diag.rejected;
      return;
    }
    for (const auto& other : solutions)
      if (same_multiset(z, other.z, config.dedup_tolerance)) return;
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t j = i + 1; j < z.size(); ++j)
        if (std::abs(z[i] - z[j]) <= config.degenerate_threshold) s.degenerate = true;
    s.energy = energy(params, z);
    s.z = std::move(z);
    solutions.push_back(std::move(s));
  };

  if (m == 1) {
    for (cplx z : free_roots(length, 1)) {
      ++diag.seeds;
      ++diag.converged;
      finish({z});
    }
  } else if (has_trivial_s_matrix(params)) {
    diag.trivial_s = true;
    const auto roots = free_roots(length, m);
    for_each_multiset(length, m, true, [&](const std::vector<int>& idx) {
      ++diag.seeds;
      ++diag.converged;
      std::vector<cplx> z;
      for (int i : idx) z.push_back(roots[i]);
      finish(std::move(z));
    });
  } else {
    const ScatteringKernel kernel(params);
    std::mt19937_64 rng(config.seed ^ (static_cast<std::uint64_t>(length) << 8) ^ m);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), angle(0.0, 2.0 * M_PI), area(0.25, 4.0);
    const auto run = [&](Eigen::VectorXcd seed) {
      ++diag.seeds;
      auto z = newton(kernel, std::move(seed), length, config);
      if (!z) {
        ++diag.dropped;
        return;
      }
      ++diag.converged;
      const double largest = z->cwiseAbs().maxCoeff(), smallest = z->cwiseAbs().minCoeff();
      if (!(smallest > 1e-8) || !(largest < 1e8)) {
        ++diag.rejected;
        return;
      }
      finish(std::vector<cplx>(z->data(), z->data() + z->size()));
    };

    const auto roots = free_roots(length, m);
    for_each_multiset(length, m, false, [&](const std::vector<int>& idx) {
      Eigen::VectorXcd seed(m);
      for (int i = 0; i < m; ++i) seed[i] = roots[idx[i]] * (1.0 + 1e-3 * cplx(unit(rng), unit(rng)));
      run(seed);
    });
    for (int s = 0; s < config.random_seeds; ++s) {
      Eigen::VectorXcd seed(m);
      for (int i = 0; i < m; ++i) seed[i] = std::polar(std::sqrt(area(rng)), angle(rng));
      run(seed);
    }
  }

  std::sort(solutions.begin(), solutions.end(), [](const BetheSolution& a, const BetheSolution& b) {
    if (std::abs(a.energy.real() - b.energy.real()) > 1e-10) return a.energy.real() < b.energy.real();
    return a.energy.imag() < b.energy.imag();
  });
  if (diagnostics) *diagnostics = diag;
  return solutions;
}

namespace {

// Amplitudes A_sigma for every permutation (in next_permutation order) and
// the N factor of every ordered pair of momenta.
struct AmplitudeTable {
  std::vector<std::vector<int>> sigmas;
  std::vector<cplx> a;
  std::vector<std::vector<cplx>> n;
};

AmplitudeTable amplitude_table(const ScatteringKernel& kernel, std::span<const cplx> z) {
  const int m = static_cast<int>(z.size());
  AmplitudeTable t;
  std::vector<int> sigma(m);
  std::iota(sigma.begin(), sigma.end(), 0);
  try {
    do {
      t.sigmas.push_back(sigma);
      t.a.push_back(kernel.amplitude(z, sigma));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    t.n.assign(m, std::vector<cplx>(m, 0.0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) t.n[i][j] = kernel.n_factor(z[i], z[j]);
  } catch (const SingularError&) {
    throw SingularError("degenerate amplitude; solution flagged");
  }
  return t;
}

cplx sum_plane_waves(const AmplitudeTable& t, std::span<const cplx> z, std::span<const int> x,
                     double* largest) {
  const std::size_t m = x.size();
  cplx total = 0.0;
  for (std::size_t s = 0; s < t.sigmas.size(); ++s) {
    const auto& sigma = t.sigmas[s];
    cplx term = t.a[s];
    for (std::size_t j = 0; j + 1 < m; ++j)
      if (x[j] == x[j + 1]) term *= t.n[sigma[j]][sigma[j + 1]];
    for (std::size_t j = 0; j < m; ++j) term *= ipow(z[sigma[j]], x[j]);
    total += term;
    if (largest) *largest = std::max(*largest, std::abs(term));
  }
  return total;
}

void check_positions(std::span<const int> x) {
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    if (x[j] > x[j + 1]) throw std::invalid_argument("positions must be sorted");
    if (j + 2 < x.size() && x[j] == x[j + 2])
      throw std::invalid_argument("a site holds at most two excitations");
  }
}

}  // namespace

cplx plane_wave_amplitude(const HamiltonianParams& params, std::span<const cplx> z,
                          std::span<const int> x) {
  if (z.size() != x.size()) throw std::invalid_argument("need one position per momentum");
  check_momenta(z);
  check_positions(x);
  const ScatteringKernel kernel(params);
  return sum_plane_waves(amplitude_table(kernel, z), z, x, nullptr);
}

std::vector<int> positions_of_state(std::uint64_t state, int length) {
  const auto values = site_values(state, length);
  std::vector<int> x;
  for (int j = 0; j < length; ++j)
    for (int k = 0; k < values[j]; ++k) x.push_back(j + 1);
  return x;
}

SectorEigenvector assemble_eigenvector(const HamiltonianParams& params, std::span<const cplx> z,
                                       int length) {
  check_momenta(z);
  SectorEigenvector psi;
  psi.m = static_cast<int>(z.size());
  psi.length = length;
  const ScatteringKernel kernel(params);
  const AmplitudeTable table = amplitude_table(kernel, z);

  double largest = 0.0, norm2 = 0.0;
  for (std::uint64_t state : sector_basis(ChainSpec{length}, psi.m)) {
    auto x = positions_of_state(state, length);
    const cplx a = sum_plane_waves(table, z, x, &largest);
    norm2 += std::norm(a);
    psi.coords.emplace(std::move(x), a);
  }
  psi.norm = std::sqrt(norm2);
  psi.null = !(psi.norm > 1e-10 * largest);
  return psi;
}

VectorXc sector_vector(const SectorEigenvector& psi) {
  const auto basis = sector_basis(ChainSpec{psi.length}, psi.m);
  VectorXc v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto it = psi.coords.find(positions_of_state(basis[i], psi.length));
    v[static_cast<Eigen::Index>(i)] = it == psi.coords.end() ? cplx(0.0) : it->second;
  }
  return v;
}

double verify_eigenpair(const MatrixXc& sector_hamiltonian, const SectorEigenvector& psi, cplx e) {
  const VectorXc v = sector_vector(psi);
  if (v.size() != sector_hamiltonian.rows())
    throw std::invalid_argument("sector matrix does not match the eigenvector's sector");
  const double norm = v.norm();
  if (norm == 0.0) throw SingularError("null Bethe vector");
  return (sector_hamiltonian * v - e * v).norm() / norm;
}

}  // namespace bethe
