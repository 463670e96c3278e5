#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "bethe_forge/errors.hpp"
#include "bethe_forge/hamiltonian.hpp"
#include "support.hpp"

using namespace bethe;
using bethe::testing::random_cplx;
using bethe::testing::random_params;

namespace {

// Permutation matrix exchanging the two sites: |a b> -> |b a>.
Matrix9 site_swap() {
  Matrix9 s = Matrix9::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s(3 * b + a, 3 * a + b) = 1.0;
  return s;
}

// Dyadic rationals survive additions and subtractions exactly.
cplx dyadic(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n(-64, 64);
  return {n(rng) / 16.0, n(rng) / 16.0};
}

}  // namespace

TEST(TwoSiteMatrix, EntriesSitAtTheirPositions) {
  HamiltonianParams h;
  h.p = 1.0, h.q = 2.0, h.t1 = 3.0, h.t2 = 4.0, h.s1 = 5.0;
  h.s2 = 6.0, h.t3 = 7.0, h.s3 = 8.0, h.tp = 9.0, h.sp = 10.0;
  const Matrix9 m = two_site_matrix(h);
  EXPECT_EQ(m(1, 3), cplx(1.0));
  EXPECT_EQ(m(3, 1), cplx(2.0));
  EXPECT_EQ(m(6, 4), cplx(3.0));
  EXPECT_EQ(m(2, 4), cplx(4.0));
  EXPECT_EQ(m(4, 6), cplx(5.0));
  EXPECT_EQ(m(4, 2), cplx(6.0));
  EXPECT_EQ(m(5, 7), cplx(7.0));
  EXPECT_EQ(m(7, 5), cplx(8.0));
  EXPECT_EQ(m(2, 6), cplx(9.0));
  EXPECT_EQ(m(6, 2), cplx(10.0));
  EXPECT_EQ((m.array() != 0.0).count(), 10);
}

TEST(TwoSiteMatrix, RoundTripsThroughParams) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto h = random_params(rng);
    EXPECT_EQ(params_from_matrix(two_site_matrix(h)), h);
  }
}

TEST(TwoSiteMatrix, ConservesExcitationNumber) {
  std::mt19937_64 rng(2);
  const Matrix9 m = two_site_matrix(random_params(rng));
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c)
      if (m(r, c) != 0.0) EXPECT_EQ(r / 3 + r % 3, c / 3 + c % 3) << r << "," << c;
}

TEST(Invariants, DiagonalRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    DiagonalInvariants inv{random_cplx(rng), random_cplx(rng), random_cplx(rng),
                           random_cplx(rng), random_cplx(rng), random_cplx(rng)};
    HamiltonianParams h;
    h.v = diagonal_from_invariants(inv, random_cplx(rng));
    const auto back = invariants(h);
    EXPECT_LT(std::abs(back.V - inv.V), 1e-14);
    EXPECT_LT(std::abs(back.X11 - inv.X11), 1e-14);
    EXPECT_LT(std::abs(back.Y - inv.Y), 1e-14);
    EXPECT_LT(std::abs(back.X12 - inv.X12), 1e-14);
    EXPECT_LT(std::abs(back.X21 - inv.X21), 1e-14);
    EXPECT_LT(std::abs(back.X22 - inv.X22), 1e-14);
    EXPECT_EQ(h.v[0][1], h.v[1][0]);
    EXPECT_EQ(h.v[0][2], h.v[2][0]);
  }
}

TEST(Invariants, TelescopicTermsLeaveThemBitIdentical) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    HamiltonianParams h;
    for (auto& row : h.v)
      for (auto& e : row) e = dyadic(rng);
    const auto shifted = apply_telescopic(h, {dyadic(rng), dyadic(rng), dyadic(rng)});
    const auto a = invariants(h), b = invariants(shifted);
    EXPECT_EQ(a.V, b.V);
    EXPECT_EQ(a.X11, b.X11);
    EXPECT_EQ(a.Y, b.Y);
    EXPECT_EQ(a.X12, b.X12);
    EXPECT_EQ(a.X21, b.X21);
    EXPECT_EQ(a.X22, b.X22);
  }
}

TEST(Invariants, ZeroTelescopicTermIsIdentity) {
  std::mt19937_64 rng(5);
  const auto h = random_params(rng);
  EXPECT_EQ(apply_telescopic(h, {0.0, 0.0, 0.0}), h);
}

TEST(Symmetries, ParityIsSiteExchange) {
  std::mt19937_64 rng(6);
  const Matrix9 s = site_swap();
  for (int i = 0; i < 10; ++i) {
    const auto h = random_params(rng);
    EXPECT_EQ(two_site_matrix(apply_parity(h)), s * two_site_matrix(h) * s);
    EXPECT_EQ(apply_parity(apply_parity(h)), h);
  }
}

TEST(Symmetries, TimeReversalIsTranspose) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10; ++i) {
    const auto h = random_params(rng);
    EXPECT_EQ(two_site_matrix(apply_time_reversal(h)), two_site_matrix(h).transpose());
    EXPECT_EQ(apply_time_reversal(apply_time_reversal(h)), h);
  }
}

TEST(Symmetries, ChargeConjugationInvolutionAndInvariants) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i) {
    const auto h = random_params(rng);
    const auto c = apply_charge_conjugation(h);
    EXPECT_EQ(apply_charge_conjugation(c), h);
    // 0 <-> 2 relabelling exchanges the roles of the singly/doubly excited
    // neighbours: the antisymmetric combination X12 - X21 flips sign.
    const auto a = invariants(h), b = invariants(c);
    EXPECT_LT(std::abs((a.X12 - a.X21) + (b.X12 - b.X21)), 1e-13);
    // Off-diagonals: p <-> s3, q <-> t3, t1 <-> t2, s1 <-> s2, tp <-> sp.
    EXPECT_EQ(c.p, h.s3);
    EXPECT_EQ(c.q, h.t3);
    EXPECT_EQ(c.t1, h.t2);
    EXPECT_EQ(c.s1, h.s2);
    EXPECT_EQ(c.tp, h.sp);
  }
}

TEST(Symmetries, FramesCommute) {
  std::mt19937_64 rng(9);
  const auto h = random_params(rng);
  EXPECT_EQ(apply_parity(apply_charge_conjugation(h)), apply_charge_conjugation(apply_parity(h)));
  EXPECT_EQ(apply_parity(apply_time_reversal(h)), apply_time_reversal(apply_parity(h)));
  EXPECT_EQ(apply_time_reversal(apply_charge_conjugation(h)),
            apply_charge_conjugation(apply_time_reversal(h)));
  std::set<std::string> words;
  for (const auto& frame : all_frames()) {
    words.insert(frame.word());
    EXPECT_EQ(Frame::from_word(frame.word()), frame);
  }
  EXPECT_EQ(words.size(), 8u);
  EXPECT_THROW(Frame::from_word("PX"), ParseError);
}

TEST(Gauge, PreservesInvariantsAndIsConjugation) {
  std::mt19937_64 rng(10);
  const auto h = random_params(rng);
  const std::array<cplx, 3> g{random_cplx(rng), random_cplx(rng), random_cplx(rng)};
  const auto gauged = apply_gauge(h, g);
  EXPECT_EQ(gauged.v, h.v);
  Matrix9 big = Matrix9::Zero();
  for (int r = 0; r < 9; ++r) big(r, r) = g[r / 3] * g[r % 3];
  const Matrix9 expected = big * two_site_matrix(h) * big.inverse();
  EXPECT_LT(bethe::testing::max_abs_diff(two_site_matrix(gauged), expected), 1e-13);
  EXPECT_THROW(apply_gauge(h, {1.0, 0.0, 1.0}), SingularError);
}

TEST(Canonical, SymmetricFrameKeepsInvariants) {
  std::mt19937_64 rng(11);
  const auto h = random_params(rng);
  const auto s = symmetric_telescoping_frame(h);
  const auto a = invariants(h), b = invariants(s);
  EXPECT_LT(std::abs(a.X12 - b.X12) + std::abs(a.X21 - b.X21) + std::abs(a.Y - b.Y), 1e-13);
  EXPECT_EQ(s.v[0][1], s.v[1][0]);
  EXPECT_EQ(canonicalize(h).v[0][0], cplx(0.0));
}

TEST(Chain, SectorBasisCountsMatchEnumeration) {
  for (int length = 2; length <= 6; ++length) {
    std::size_t total = 0;
    for (int m = 0; m <= 2 * length; ++m) {
      const auto basis = sector_basis(ChainSpec{length}, m);
      // Independent count: coefficient of x^m in (1 + x + x^2)^L.
      std::vector<long> poly{1};
      for (int i = 0; i < length; ++i) {
        std::vector<long> next(poly.size() + 2, 0);
        for (std::size_t k = 0; k < poly.size(); ++k)
          for (int d = 0; d < 3; ++d) next[k + d] += poly[k];
        poly = next;
      }
      EXPECT_EQ(static_cast<long>(basis.size()), poly[m]);
      EXPECT_TRUE(std::is_sorted(basis.begin(), basis.end()));
      total += basis.size();
    }
    std::size_t full = 1;
    for (int i = 0; i < length; ++i) full *= 3;
    EXPECT_EQ(total, full);
  }
}

TEST(Chain, SiteValuesUseMostSignificantTritFirst) {
  EXPECT_EQ(site_values(5, 3), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(excitation_number(5, 3), 3);
}

TEST(Chain, CommutesWithTotalExcitationNumber) {
  std::mt19937_64 rng(12);
  const int length = 4;
  const auto m = chain_matrix(random_params(rng), ChainSpec{length});
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrixXc::InnerIterator it(m, k); it; ++it)
      EXPECT_EQ(excitation_number(it.row(), length), excitation_number(it.col(), length));
}

TEST(Chain, TwoSitesPeriodicIsSumOfBothBonds) {
  std::mt19937_64 rng(13);
  const auto h = random_params(rng);
  const MatrixXc chain = MatrixXc(chain_matrix(h, ChainSpec{2}));
  const Matrix9 two = two_site_matrix(h);
  const Matrix9 swap = site_swap();
  EXPECT_LT((chain - (two + swap * two * swap)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Chain, PseudoVacuumHasEigenvalueExactlyZero) {
  std::mt19937_64 rng(14);
  const auto h = canonicalize(random_params(rng));
  const auto m = chain_matrix(h, ChainSpec{5});
  // Column of |00000> is identically zero: H|Omega> = 0 exactly.
  EXPECT_EQ(MatrixXc(m).col(0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Chain, LengthLimits) {
  std::mt19937_64 rng(15);
  const auto h = random_params(rng);
  EXPECT_THROW(chain_matrix(h, ChainSpec{1}), ModeError);
  EXPECT_THROW(chain_matrix(h, ChainSpec{ChainSpec::max_length() + 1}), ModeError);
  ::setenv("BETHE_FORGE_LMAX", "4", 1);
  EXPECT_EQ(ChainSpec::max_length(), 4);
  EXPECT_THROW(sector_basis(ChainSpec{5}, 1), ModeError);
  ::unsetenv("BETHE_FORGE_LMAX");
  EXPECT_EQ(ChainSpec::max_length(), ChainSpec::kDefaultMaxLength);
}

TEST(Gates, HypothesisChecks) {
  HamiltonianParams h;
  h.p = 1.0;
  EXPECT_FALSE(h.has_rank_one_symmetry());
  h.s2 = 1.0;
  EXPECT_TRUE(h.has_rank_one_symmetry());
  HamiltonianParams g;
  g.t1 = 1.0;
  EXPECT_FALSE(g.has_excitation_channel());
  g.s3 = 0.5;
  EXPECT_TRUE(g.has_excitation_channel());
}
