#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bethe_forge/ed.hpp"
#include "bethe_forge/errors.hpp"
#include "bethe_forge/families.hpp"
#include "bethe_forge/solver.hpp"
#include "support.hpp"

using namespace bethe;
using namespace bethe::testing;

TEST(Energy, SumOfDispersions) {
  HamiltonianParams h;
  h.p = 2.0;
  h.q = cplx(0.0, 1.0);
  h.t2 = 1.0;
  h.v[0][1] = h.v[1][0] = 1.5;  // V = 3
  const std::vector<cplx> z{cplx(0.0, 1.0), 2.0};
  // 2V + (q i + p / i) + (2 q + p / 2)
  const cplx expected = 6.0 + (cplx(-1.0, 0.0) + cplx(0.0, -2.0)) + (cplx(0.0, 2.0) + 1.0);
  EXPECT_LT(std::abs(energy(h, z) - expected), 1e-14);
}

TEST(Bae, SingleMagnonRootsAreRootsOfUnity) {
  std::mt19937_64 rng(60);
  const auto h = construct({Family::SpR, 0}, random_free(Family::SpR, rng));
  for (int length : {3, 4, 5, 6}) {
    const auto solutions = solve_bae(h, length, 1);
    ASSERT_EQ(solutions.size(), static_cast<std::size_t>(length));
    for (const auto& s : solutions) {
      EXPECT_LT(std::abs(std::pow(s.z[0], length) - 1.0), 1e-10);
      EXPECT_LE(s.bae_residual, 1e-10);
    }
  }
}

TEST(Bae, TrivialScatteringFamiliesGiveEveryDistinctSubset) {
  std::mt19937_64 rng(61);
  for (const FamilyTag tag : {FamilyTag{Family::V17_1a, 1}, FamilyTag{Family::V17_1b, -1},
                              FamilyTag{Family::V14_2, 0}}) {
    const auto h = construct(tag, random_free(tag.family, rng));
    EXPECT_TRUE(has_trivial_s_matrix(h)) << to_string(tag);
    SolverDiagnostics diag;
    const auto solutions = solve_bae(h, 4, 2, {}, &diag);
    EXPECT_TRUE(diag.trivial_s);
    ASSERT_EQ(solutions.size(), 6u) << to_string(tag);
    for (const auto& s : solutions) {
      for (cplx z : s.z) EXPECT_LT(std::abs(std::pow(z, 4) + 1.0), 1e-10);
      EXPECT_GT(std::abs(s.z[0] - s.z[1]), 1e-3);
    }
  }
  EXPECT_FALSE(has_trivial_s_matrix(construct({Family::gZF, 0}, random_free(Family::gZF, rng))));
}

TEST(Bae, RefusesUnsupportedSizes) {
  std::mt19937_64 rng(62);
  const auto h = construct({Family::gZF, 0}, random_free(Family::gZF, rng));
  try {
    solve_bae(h, 6, 4);
    FAIL() << "expected a mode error";
  } catch (const ModeError& e) {
    EXPECT_NE(std::string(e.what()).find("M = 4"), std::string::npos);
  }
  EXPECT_THROW(solve_bae(h, 6, 0), ModeError);
  EXPECT_THROW(solve_bae(h, ChainSpec::max_length() + 1, 1), ModeError);
}

TEST(Bae, SolutionsAreSortedAndDeterministic) {
  std::mt19937_64 rng(63);
  const auto h = construct({Family::gB, 1}, random_free(Family::gB, rng));
  const auto a = solve_bae(h, 4, 2), b = solve_bae(h, 4, 2);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].energy, b[i].energy);
}

// Every Bethe solution that assembles to a nonzero vector must be an
// eigenvector of the sector matrix, and its energy an ED eigenvalue.
TEST(Eigenpairs, BetheVectorsSolveTheSectorProblem) {
  std::mt19937_64 rng(64);
  for (const auto& tag : primary_tags()) {
    const auto h = construct(tag, random_free(tag.family, rng));
    for (int length : {3, 4, 5}) {
      for (int m : {1, 2}) {
        const MatrixXc sector = sector_matrix(h, length, m);
        const auto ed = sector_spectrum(h, length, m);
        const double scale = energy_scale(h);
        int accepted = 0;
        for (const auto& s : solve_bae(h, length, m)) {
          const auto psi = assemble_eigenvector(h, s.z, length);
          if (psi.null) continue;
          ++accepted;
          EXPECT_LE(verify_eigenpair(sector, psi, s.energy), 1e-8 * scale)
              << to_string(tag) << " L=" << length << " M=" << m;
          EXPECT_EQ(compare(std::vector<cplx>{s.energy}, ed, 1e-8, scale).matched, 1)
              << to_string(tag) << " L=" << length << " M=" << m;
        }
        EXPECT_GT(accepted, 0) << to_string(tag) << " L=" << length << " M=" << m;
      }
    }
  }
}

TEST(Eigenpairs, CoincidentRootsAssembleToNull) {
  std::mt19937_64 rng(65);
  const auto h = construct({Family::V14_2, 0}, random_free(Family::V14_2, rng));
  const cplx z = std::polar(1.0, M_PI / 4.0);
  EXPECT_TRUE(assemble_eigenvector(h, std::vector<cplx>{z, z}, 4).null);
}

TEST(Eigenpairs, TranslationActsByTotalMomentum) {
  std::mt19937_64 rng(66);
  const auto h = construct({Family::gZF, 0}, random_free(Family::gZF, rng));
  const int length = 5;
  for (const auto& s : solve_bae(h, length, 2)) {
    const auto psi = assemble_eigenvector(h, s.z, length);
    if (psi.null) continue;
    const cplx total = s.z[0] * s.z[1];
    for (const auto& [x, value] : psi.coords) {
      std::vector<int> shifted;
      for (int xi : x) shifted.push_back(xi % length + 1);
      std::sort(shifted.begin(), shifted.end());
      EXPECT_LT(std::abs(psi.coords.at(shifted) - total * value), 1e-8 * psi.norm);
    }
  }
}

TEST(Eigenpairs, SingleMagnonAmplitudeIsPlaneWave) {
  std::mt19937_64 rng(67);
  const auto h = random_params(rng);
  const std::vector<cplx> z{random_momentum(rng)};
  const std::vector<int> x{3};
  EXPECT_LT(std::abs(plane_wave_amplitude(h, z, x) - std::pow(z[0], 3)), 1e-12);
}

TEST(Eigenpairs, PositionsOfState) {
  // Sites (0, 2, 1): index 0 * 9 + 2 * 3 + 1.
  EXPECT_EQ(positions_of_state(7, 3), (std::vector<int>{2, 2, 3}));
  EXPECT_EQ(positions_of_state(0, 3), std::vector<int>{});
}

TEST(Eigenpairs, ZeroVectorIsRejected) {
  SectorEigenvector psi;
  psi.m = 1;
  psi.length = 3;
  for (int x = 1; x <= 3; ++x) psi.coords[{x}] = 0.0;
  const MatrixXc sector = MatrixXc::Identity(3, 3);
  EXPECT_THROW(verify_eigenpair(sector, psi, 1.0), SingularError);
}
