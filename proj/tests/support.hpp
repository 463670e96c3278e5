#pragma once

// Shared helpers for the C++ test suites: seeded random draws and a direct
// infinite-line evaluation of the Schroedinger equation used as an oracle
// for the constraint sums.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "bethe_forge/constraints.hpp"
#include "bethe_forge/families.hpp"
#include "bethe_forge/hamiltonian.hpp"

namespace bethe::testing {

// Magnitude in [0.5, 1.5], uniform phase: keeps draws away from zero so that
// family formulas with denominators stay well conditioned.
inline cplx random_cplx(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.5, 1.5), angle(0.0, 2.0 * M_PI);
  return std::polar(mag(rng), angle(rng));
}

inline cplx random_momentum(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> area(0.25, 4.0), angle(0.0, 2.0 * M_PI);
  return std::polar(std::sqrt(area(rng)), angle(rng));
}

inline HamiltonianParams random_params(std::mt19937_64& rng) {
  HamiltonianParams h;
  for (const auto& field : kOffDiagonalFields) h.*field.member = random_cplx(rng);
  for (auto& row : h.v)
    for (auto& entry : row) entry = random_cplx(rng);
  return h;
}

inline FreeParams random_free(Family family, std::mt19937_64& rng, bool with_v = true) {
  FreeParams free;
  for (const auto& name : free_parameter_names(family)) free[name] = random_cplx(rng);
  if (with_v) free["V"] = random_cplx(rng);
  return free;
}

inline std::vector<FamilyTag> all_tags() {
  std::vector<FamilyTag> tags;
  for (Family f : kAllFamilies) {
    if (has_branch(f)) {
      tags.push_back({f, 1});
      tags.push_back({f, -1});
    } else {
      tags.push_back({f, 0});
    }
  }
  return tags;
}

// A second draw with the same reduced parameters and the same p: t2 (and t1
// for gB) scaled by c, s1 by 1/c for gZF.
inline FreeParams gauge_partner(Family family, FreeParams free, cplx c) {
  free["t2"] *= c;
  if (family == Family::gB) free["t1"] *= c;
  if (family == Family::gZF) free["s1"] /= c;
  return free;
}

// One tag per family, branch +1 where there is one.
inline std::vector<FamilyTag> primary_tags() {
  std::vector<FamilyTag> tags;
  for (Family f : kAllFamilies) tags.push_back({f, has_branch(f) ? 1 : 0});
  return tags;
}

inline double max_abs_diff(const Matrix9& a, const Matrix9& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Plane-wave amplitude on the infinite line, built without the library's
// reduced-word routine: A_sigma is the product of S(z_a, z_b) over pairs
// a < b that sigma puts in the opposite order.
class LineOracle {
 public:
  LineOracle(const HamiltonianParams& params, std::vector<cplx> z)
      : params_(canonicalize(params)), kernel_(params_), z_(std::move(z)) {}

  // Occupations keyed by site; sites not present hold 0.
  using Config = std::map<int, int>;

  cplx amplitude(const Config& config) const {
    std::vector<int> x;
    for (const auto& [site, n] : config)
      for (int k = 0; k < n; ++k) x.push_back(site);
    const int m = static_cast<int>(x.size());
    std::vector<int> sigma(m);
    std::iota(sigma.begin(), sigma.end(), 0);
    cplx total = 0.0;
    do {
      cplx term = 1.0;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
          if (sigma[i] > sigma[j]) term *= kernel_.s_matrix(z_[sigma[j]], z_[sigma[i]]);
      for (int j = 0; j + 1 < m; ++j)
        if (x[j] == x[j + 1]) term *= kernel_.n_factor(z_[sigma[j]], z_[sigma[j + 1]]);
      for (int j = 0; j < m; ++j) term *= std::pow(z_[sigma[j]], x[j]);
      total += term;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
  }

  // (H psi)(config) - E psi(config), with E = M V + sum(q z + p / z).
  cplx residual(const Config& config) const {
    const Matrix9 h = two_site_matrix(params_);
    int lo = config.begin()->first - 1, hi = config.rbegin()->first + 1;
    const auto occ = [&](const Config& c, int site) {
      auto it = c.find(site);
      return it == c.end() ? 0 : it->second;
    };
    cplx total = 0.0;
    for (int j = lo; j < hi; ++j) {
      const int a = occ(config, j), b = occ(config, j + 1);
      const int row = 3 * a + b;
      for (int col = 0; col < 9; ++col) {
        if (h(row, col) == 0.0) continue;
        Config other = config;
        other.erase(j);
        other.erase(j + 1);
        if (col / 3) other[j] = col / 3;
        if (col % 3) other[j + 1] = col % 3;
        total += h(row, col) * amplitude(other);
      }
    }
    int m = 0;
    for (const auto& [site, n] : config) m += n;
    cplx e = static_cast<double>(m) * invariants(params_).V;
    for (cplx z : z_) e += params_.q * z + params_.p / z;
    return total - e * amplitude(config);
  }

 private:
  HamiltonianParams params_;
  ScatteringKernel kernel_;
  std::vector<cplx> z_;
};

}  // namespace bethe::testing
