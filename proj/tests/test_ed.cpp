#include <gtest/gtest.h>

#include <random>

#include "bethe_forge/ed.hpp"
#include "bethe_forge/errors.hpp"
#include "bethe_forge/families.hpp"
#include "support.hpp"

using namespace bethe;
using namespace bethe::testing;

TEST(Sectors, DimensionsAddUpToHilbertSpace) {
  for (int length : {2, 3, 4, 5}) {
    std::uint64_t total = 0;
    for (int m = 0; m <= 2 * length; ++m) total += sector_basis({length}, m).size();
    std::uint64_t full = 1;
    for (int i = 0; i < length; ++i) full *= 3;
    EXPECT_EQ(total, full);
  }
}

TEST(Sectors, BlocksReproduceFullSpectrum) {
  std::mt19937_64 rng(70);
  for (int length : {3, 4}) {
    const auto h = random_params(rng);
    std::vector<cplx> blocks;
    for (int m = 0; m <= 2 * length; ++m) {
      const auto spec = sector_spectrum(h, length, m);
      blocks.insert(blocks.end(), spec.eigenvalues.begin(), spec.eigenvalues.end());
    }
    EXPECT_TRUE(same_spectrum(blocks, full_spectrum(h, length), 1e-9));
  }
}

TEST(Sectors, SingleMagnonSectorIsTheDispersion) {
  std::mt19937_64 rng(71);
  for (const auto& tag : primary_tags()) {
    const auto h = construct(tag, random_free(tag.family, rng));
    const cplx v = invariants(h).V;
    for (int length : {3, 4, 5, 6}) {
      std::vector<cplx> expected;
      for (int k = 0; k < length; ++k) {
        const cplx z = std::polar(1.0, 2.0 * M_PI * k / length);
        expected.push_back(v + h.q * z + h.p / z);
      }
      const auto ed = sector_spectrum(h, length, 1);
      EXPECT_TRUE(same_spectrum(expected, ed.eigenvalues, 1e-10 * energy_scale(h))) << to_string(tag);
    }
  }
}

TEST(Sectors, PseudoVacuumSectorIsZero) {
  std::mt19937_64 rng(72);
  const auto h = construct({Family::gIK, 1}, random_free(Family::gIK, rng));
  const auto ed = sector_spectrum(h, 5, 0);
  ASSERT_EQ(ed.dimension, 1);
  EXPECT_EQ(ed.eigenvalues[0], cplx(0.0));
}

TEST(Sectors, GaugeAndTelescopingLeaveSpectraUnchanged) {
  std::mt19937_64 rng(73);
  const auto h = random_params(rng);
  const auto gauged = apply_gauge(h, {random_cplx(rng), random_cplx(rng), random_cplx(rng)});
  const auto shifted = apply_telescopic(h, {random_cplx(rng), random_cplx(rng), random_cplx(rng)});
  for (int m = 1; m <= 3; ++m) {
    const auto base = sector_spectrum(h, 4, m).eigenvalues;
    EXPECT_TRUE(same_spectrum(base, sector_spectrum(gauged, 4, m).eigenvalues, 1e-9));
    EXPECT_TRUE(same_spectrum(base, sector_spectrum(shifted, 4, m).eigenvalues, 1e-9));
  }
}

TEST(Compare, CorruptedEnergyIsUnmatched) {
  std::mt19937_64 rng(74);
  const auto h = construct({Family::SpR, 0}, random_free(Family::SpR, rng));
  const auto ed = sector_spectrum(h, 4, 1);
  std::vector<cplx> energies = ed.eigenvalues;
  energies[0] += 1e-3;
  const auto result = compare(energies, ed, 1e-8, energy_scale(h));
  EXPECT_EQ(result.candidates, 4);
  EXPECT_EQ(result.matched, 3);
  ASSERT_EQ(result.unmatched.size(), 1u);
  EXPECT_EQ(result.unmatched[0], energies[0]);
  EXPECT_DOUBLE_EQ(result.coverage, 0.75);
}

TEST(Compare, EachEigenvalueUsedOnce) {
  SectorSpectrum ed;
  ed.dimension = 2;
  ed.eigenvalues = {1.0, 2.0};
  const auto result = compare(std::vector<cplx>{1.0, 1.0}, ed, 1e-8);
  EXPECT_EQ(result.matched, 1);
  EXPECT_FALSE(same_spectrum({1.0, 1.0}, {1.0, 2.0}, 1e-8));
  EXPECT_TRUE(same_spectrum({2.0, 1.0}, {1.0, 2.0}, 1e-8));
}

TEST(Limits, LongChainsAreRefused) {
  std::mt19937_64 rng(75);
  const auto h = random_params(rng);
  EXPECT_THROW(sector_matrix(h, ChainSpec::max_length() + 1, 1), ModeError);
}
