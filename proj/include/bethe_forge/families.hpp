#pragma once

// The ten irreducible families of three-state Hamiltonians solvable by
// coordinate Bethe ansatz: constructors, closed-form S and N, reduced
// parameters, the classifier, and the normalization/gauge reduction.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bethe_forge/constraints.hpp"
#include "bethe_forge/hamiltonian.hpp"

namespace bethe {

enum class Family { gZF, gIK, gB, SpR, SB5, V17_1a, V17_1b, V17_2, V14_1, V14_2 };

inline constexpr std::array<Family, 10> kAllFamilies = {
    Family::gZF,    Family::gIK,    Family::gB,    Family::SpR,   Family::SB5,
    Family::V17_1a, Family::V17_1b, Family::V17_2, Family::V14_1, Family::V14_2};

std::string to_string(Family family);
Family family_from_string(const std::string& name);

// Number of nonzero entries of the two-site matrix (19, 17 or 14).
int vertex_count(Family family);

// Whether the family carries a discrete branch, and its name:
//   gIK "u" (u+ / u-), gB and SB5 "J" (J / J^2), 17V1a and 14V1 "epsilon"
//   (+1 / -1), 17V1b "I" (+i / -i).
bool has_branch(Family family);
std::string branch_name(Family family);

struct FamilyTag {
  Family family = Family::gZF;
  // +1 or -1 for families with a branch, 0 otherwise.
  int branch = 0;

  friend bool operator==(const FamilyTag&, const FamilyTag&) = default;
};
std::string to_string(const FamilyTag& tag);

// Free parameters by name. Every family also accepts "V", the (physically
// trivial) coefficient of s^z, defaulting to zero.
using FreeParams = std::map<std::string, cplx>;

// Names of the free parameters of each family (excluding "V").
std::vector<std::string> free_parameter_names(Family family);

// J with J^2 + J + 1 = 0: exp(2 i pi / 3) for branch +1, its square otherwise.
cplx cube_root_of_unity(int branch);

// The two roots u+, u- of v^4 Z^2 + (1 + 2v - v^2) Z + 1 = 0, using the
// principal square root of the discriminant for u+.
std::pair<cplx, cplx> ik_roots(cplx v);

// Builds the raw Hamiltonian of a family, in the symmetric telescoping frame
// with v00 = 0. Throws SingularError at degenerate free-parameter points and
// std::invalid_argument for unknown/missing names or a bad branch.
HamiltonianParams construct(const FamilyTag& tag, const FreeParams& free);

// Solutions of the primary-vacuum constraints only, before the conditions
// coming from the charge-conjugated vacuum are imposed. Available for the
// 17V1 (tag V17_1a or V17_1b, branch ignored), 17V2, 14V1 and 14V2 families.
// Free parameters:
//   17V1: p q tp t2 t3 s3 X22    17V2: p q tp t2 t3 s3
//   14V1: p tp t2 t3 X21 X22     14V2: p tp t1 t2
HamiltonianParams construct_half_constrained(Family family, const FreeParams& free);

// Reduced parameters the family's reduced Hamiltonian depends on, using the
// ReducedParams field names ("tau_p", "theta", ...), plus "v" for gIK and
// "xi" = X22/p for 14V1.
std::vector<std::string> physical_parameter_names(Family family);

struct ReducedParams {
  std::optional<cplx> tau_p, tau_2, tau_3, theta, upsilon, sigma, mu;
};

// Literal ratios t_p/p, t2/p, t3/p, q/p, Y/p, s1 t2/p^2, t1/t2. Throws
// SingularError when p = 0; fields with other vanishing denominators are unset.
ReducedParams reduced_parameters(const HamiltonianParams& params);

// Closed-form S and N of each family in terms of its reduced parameters.
cplx family_s_matrix(const FamilyTag& tag, const ReducedParams& reduced, cplx z1, cplx z2);
cplx family_n_factor(const FamilyTag& tag, const ReducedParams& reduced, cplx z1, cplx z2);

// Human-readable closed forms used by the catalog.
std::string family_s_formula(Family family);
std::string family_n_formula(Family family);

struct FamilyMatch {
  FamilyTag tag;
  FreeParams free_params;
  // The input equals apply_frame(construct(tag, free_params), frame) up to
  // telescoping terms.
  Frame frame;
  // Diagonal gauge G = diag(g0, g1, g2), g0 = 1, bringing the matched
  // Hamiltonian to the frame used by reduce_hamiltonian.
  std::array<cplx, 3> gauge{1.0, 1.0, 1.0};
  double fit_residual = 0.0;
};

struct Classification {
  SolvabilityVerdict verdict;
  // First match in family precedence order, identity frame first.
  std::optional<FamilyMatch> match;
  // Every (family, branch, frame) consistent with the input.
  std::vector<FamilyMatch> all_matches;
  // More than one distinct family matched: the input sits on an intersection.
  bool degenerate = false;
};

struct ClassifyOptions {
  double tolerance = 1e-9;
  SolvabilityOptions solvability{};
};

// Anchor-based fit of a single (family, branch) against params as given (no
// frame change). Returns nullopt if anchors are degenerate or the residual
// exceeds tolerance.
std::optional<FamilyMatch> fit_family(const HamiltonianParams& params, const FamilyTag& tag,
                                      double tolerance);

// Throws HypothesisError if the hypothesis gates fail. Inputs that fail the
// constraint test are reported with an empty match.
Classification classify(const HamiltonianParams& params, const ClassifyOptions& options = {});

struct ReducedHamiltonian {
  Matrix9 matrix;
  ReducedParams reduced;
  cplx normalization;  // N0
  std::array<cplx, 3> gauge;
};

// N0 (G x G)(H - V/2 (s^z_1 + s^z_2))(G x G)^{-1}, evaluated in the match's
// frame and returned in the symmetric telescoping frame.
ReducedHamiltonian reduce_hamiltonian(const HamiltonianParams& params, const FamilyMatch& match);

}  // namespace bethe
