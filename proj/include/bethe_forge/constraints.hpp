#pragma once

// Two-body data of the coordinate Bethe ansatz (Lambda, S-matrix, decay
// coefficient N), plane-wave amplitudes, and the randomized identity test
// deciding whether the three-body and four-body constraint sums vanish.
//
// Momenta are always carried as z = exp(ik); k itself is never formed.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bethe_forge/hamiltonian.hpp"

namespace bethe {

struct Momentum {
  cplx z;

  explicit Momentum(cplx value);
};

// Precomputed view of a Hamiltonian for repeated evaluation of Lambda, S, N.
class ScatteringKernel {
 public:
  explicit ScatteringKernel(const HamiltonianParams& params);

  const HamiltonianParams& params() const { return params_; }
  const DiagonalInvariants& invariants() const { return inv_; }

  // Lambda(z1, z2) with exp(ik_j) -> z1, exp(ik_n) -> z2.
  cplx lambda(cplx z1, cplx z2) const;
  // Sum of the magnitudes of the two products making up lambda; used as the
  // reference scale for singularity detection.
  double lambda_scale(cplx z1, cplx z2) const;
  // Partial derivatives of lambda with respect to its first and second argument.
  std::pair<cplx, cplx> lambda_gradient(cplx z1, cplx z2) const;

  // S(z1, z2) = -Lambda(z1, z2) / Lambda(z2, z1). Throws SingularError.
  cplx s_matrix(cplx z1, cplx z2) const;
  // N(z1, z2) = (z1 - z2)(p + q z1 z2)(t2 + t1 z1 z2) / (2 Lambda(z2, z1)).
  cplx n_factor(cplx z1, cplx z2) const;

  // True when Lambda(z2, z1) is numerically zero relative to its scale.
  bool singular(cplx z1, cplx z2) const;

  // Amplitude A_sigma^{(doubled)} relative to A_identity = 1.
  //   sigma[n]  index of the momentum carried by the n-th excitation;
  //   doubled   positions j with x_{j+1} = x_j (0-based, sorted).
  cplx amplitude(std::span<const cplx> z, std::span<const int> sigma,
                 std::span<const int> doubled = {}) const;

  // Symmetrized constraint sums. `scale` receives the largest magnitude of
  // any individual summand.
  cplx constraint_e21(std::span<const cplx, 3> z, double* scale = nullptr) const;
  cplx constraint_e12(std::span<const cplx, 3> z, double* scale = nullptr) const;
  cplx constraint_e22(std::span<const cplx, 4> z, double* scale = nullptr) const;

 private:
  HamiltonianParams params_;
  DiagonalInvariants inv_;
};

// Threshold under which |Lambda(z2, z1)| counts as zero, relative to the
// magnitude of its terms.
inline constexpr double kSingularRelTol = 1e-13;

cplx lambda_fn(const HamiltonianParams& params, Momentum z1, Momentum z2);
cplx s_matrix(const HamiltonianParams& params, Momentum z1, Momentum z2);
cplx n_factor(const HamiltonianParams& params, Momentum z1, Momentum z2);
cplx constraint_e21(const HamiltonianParams& params, std::span<const Momentum, 3> z);
cplx constraint_e12(const HamiltonianParams& params, std::span<const Momentum, 3> z);
cplx constraint_e22(const HamiltonianParams& params, std::span<const Momentum, 4> z);

// Reduced word for sigma: the adjacent transpositions T_j (0-based j) such
// that identity * T_{w0} * T_{w1} * ... = sigma.
std::vector<int> reduced_word(std::span<const int> sigma);

enum class ConstraintTag { E21, E12, E22 };
std::string to_string(ConstraintTag tag);

struct SolvabilityVerdict {
  bool solvable = false;
  double max_residual = 0.0;
  int samples = 0;
  std::optional<ConstraintTag> failing_constraint;
  // P/C/T word applied before testing, when the input itself lies outside
  // the (p, q) != 0, (t1, t2) != 0 presentation.
  std::string frame;
};

struct SolvabilityOptions {
  int samples = 20;
  double tolerance = 1e-9;
  std::uint64_t seed = 0x5eed;
};

// Throws HypothesisError when (t1,t2,s1,s2) = 0 or (p,q,t3,s3) = 0.
SolvabilityVerdict is_cba_solvable(const HamiltonianParams& params,
                                   const SolvabilityOptions& options = {});

}  // namespace bethe
