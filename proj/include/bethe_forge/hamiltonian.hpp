#pragma once

// Two-site and periodic-chain Hamiltonians for three-state U(1)-invariant
// nearest-neighbour spin chains, together with the discrete (P, C, T) and
// continuous (gauge, telescoping) transformations acting on them.
//
// Conventions:
//   - one-site basis |0>, |1>, |2> with s^z|j> = j|j>;
//   - two-site basis index 3*i1 + i2 for |i1 i2>;
//   - chain basis index sum_j s_j 3^(L-j), i.e. site 1 is the most
//     significant trit. Eigenvector coordinates depend on this ordering.

#include <array>
#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace bethe {

using cplx = std::complex<double>;
using Matrix9 = Eigen::Matrix<cplx, 9, 9>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using SparseMatrixXc = Eigen::SparseMatrix<cplx>;

struct HamiltonianParams {
  cplx p{}, q{}, t1{}, t2{}, s1{}, s2{}, t3{}, s3{}, tp{}, sp{};
  // v[i][j] multiplies E_ii (x) E_jj.
  std::array<std::array<cplx, 3>, 3> v{};

  // (t1, t2, s1, s2) != 0: the symmetry algebra has rank one.
  bool has_rank_one_symmetry() const;
  // (p, q, t3, s3) != 0: a pseudo-excitation can propagate on some vacuum.
  bool has_excitation_channel() const;

  friend bool operator==(const HamiltonianParams&, const HamiltonianParams&) = default;
};

// Named access to the ten off-diagonal amplitudes, in the order used by the
// JSON format and by reports.
struct OffDiagonalField {
  std::string_view name;
  cplx HamiltonianParams::*member;
  int row;  // two-site matrix position
  int col;
};
extern const std::array<OffDiagonalField, 10> kOffDiagonalFields;

// Combinations of the diagonal entries left unchanged by telescoping terms.
struct DiagonalInvariants {
  cplx V, X11, Y, X12, X21, X22;
};

struct ChainSpec {
  int length = 2;

  // Dense ED keeps 3^L below ~20k by default. Overridden by BETHE_FORGE_LMAX.
  static constexpr int kDefaultMaxLength = 9;
  static int max_length();
};

Matrix9 two_site_matrix(const HamiltonianParams& params);

// Inverse of two_site_matrix; entries outside the U(1) pattern are ignored.
HamiltonianParams params_from_matrix(const Matrix9& h);

DiagonalInvariants invariants(const HamiltonianParams& params);

// Diagonal entries reproducing `inv` with v00 = v00_value, in the symmetric
// telescoping frame v01 = v10 and v02 = v20.
std::array<std::array<cplx, 3>, 3> diagonal_from_invariants(const DiagonalInvariants& inv,
                                                            cplx v00_value = 0.0);

// Subtracts v00 times the identity so that the pseudo-vacuum has energy zero.
HamiltonianParams canonicalize(const HamiltonianParams& params);

// Moves the diagonal to the symmetric telescoping frame (v01 = v10,
// v02 = v20) without changing v00 or any invariant.
HamiltonianParams symmetric_telescoping_frame(const HamiltonianParams& params);

// Parity: H_12 -> H_21.
HamiltonianParams apply_parity(const HamiltonianParams& params);
// Time reversal: H_12 -> H_12^t.
HamiltonianParams apply_time_reversal(const HamiltonianParams& params);
// Charge conjugation: relabel the one-site states 0 <-> 2.
HamiltonianParams apply_charge_conjugation(const HamiltonianParams& params);

// Conjugation by G (x) G with G = diag(g0, g1, g2). Throws SingularError when
// any factor vanishes.
HamiltonianParams apply_gauge(const HamiltonianParams& params, const std::array<cplx, 3>& g);

// H -> H + A (x) 1 - 1 (x) A with A = diag(a0, a1, a2).
HamiltonianParams apply_telescopic(const HamiltonianParams& params, const std::array<cplx, 3>& a);

// Word over {P, C, T}. The three generators are commuting involutions, so a
// frame is fully described by which of them it contains.
struct Frame {
  bool parity = false;
  bool charge = false;
  bool time = false;

  std::string word() const;  // "P", "PC", ... ; "" for the identity
  static Frame from_word(std::string_view word);
  friend bool operator==(const Frame&, const Frame&) = default;
};

// The eight frames in a fixed order: id, P, C, T, PC, PT, CT, PCT.
const std::array<Frame, 8>& all_frames();

HamiltonianParams apply_frame(const HamiltonianParams& params, const Frame& frame);

// Total s^z of a chain basis state.
int excitation_number(std::uint64_t state, int length);

// Trits of a chain basis state, site 1 first.
std::vector<int> site_values(std::uint64_t state, int length);

// Full periodic chain Hamiltonian sum_j H_{j,j+1}. Throws ModeError if the
// chain is longer than ChainSpec::max_length().
SparseMatrixXc chain_matrix(const HamiltonianParams& params, const ChainSpec& spec);

// Basis states with total s^z = M, in increasing chain-index order (which is
// lexicographic order on the site values).
std::vector<std::uint64_t> sector_basis(const ChainSpec& spec, int m);

}  // namespace bethe
