#include "bethe_forge/constraints.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "bethe_forge/errors.hpp"

namespace bethe {

Momentum::Momentum(cplx value) : z(value) {
  if (value == 0.0) throw SingularError("invalid momentum: z = 0");
}

ScatteringKernel::ScatteringKernel(const HamiltonianParams& params)
    : params_(params), inv_(bethe::invariants(params)) {}

cplx ScatteringKernel::lambda(cplx zj, cplx zn) const {
  const auto& h = params_;
  const cplx prod = zj * zn;
  const cplx hopping = zn * (h.s1 + h.s2 * prod) * (h.t2 + h.t1 * prod);
  const cplx pair = inv_.Y * prod - h.q * prod * (zj + zn) - h.p * (zj + zn) + h.sp * prod * prod + h.tp;
  const cplx single = inv_.X11 * zn - h.q * prod - h.p;
  return hopping - pair * single;
}

double ScatteringKernel::lambda_scale(cplx zj, cplx zn) const {
  const auto& h = params_;
  const cplx prod = zj * zn;
  const double hopping = std::abs(zn) * (std::abs(h.s1) + std::abs(h.s2 * prod)) *
                         (std::abs(h.t2) + std::abs(h.t1 * prod));
  const double pair = std::abs(inv_.Y * prod) + std::abs(h.q * prod) * (std::abs(zj) + std::abs(zn)) +
                      std::abs(h.p) * (std::abs(zj) + std::abs(zn)) + std::abs(h.sp * prod * prod) +
                      std::abs(h.tp);
  const double single = std::abs(inv_.X11 * zn) + std::abs(h.q * prod) + std::abs(h.p);
  return hopping + pair * single;
}

std::pair<cplx, cplx> ScatteringKernel::lambda_gradient(cplx a, cplx b) const {
  const auto& h = params_;
  const cplx ab = a * b;
  const cplx s = h.s1 + h.s2 * ab, t = h.t2 + h.t1 * ab;
  const cplx pair = inv_.Y * ab - h.q * ab * (a + b) - h.p * (a + b) + h.sp * ab * ab + h.tp;
  const cplx single = inv_.X11 * b - h.q * ab - h.p;
  const cplx hop_a = b * b * (h.s2 * t + s * h.t1);
  const cplx hop_b = s * t + ab * (h.s2 * t + s * h.t1);
  const cplx pair_a = inv_.Y * b - h.q * (2.0 * ab + b * b) - h.p + 2.0 * h.sp * a * b * b;
  const cplx pair_b = inv_.Y * a - h.q * (a * a + 2.0 * ab) - h.p + 2.0 * h.sp * a * a * b;
  const cplx single_a = -h.q * b, single_b = inv_.X11 - h.q * a;
  return {hop_a - pair_a * single - pair * single_a, hop_b - pair_b * single - pair * single_b};
}

bool ScatteringKernel::singular(cplx z1, cplx z2) const {
  const double scale = lambda_scale(z2, z1);
  return scale == 0.0 || std::abs(lambda(z2, z1)) <= kSingularRelTol * scale;
}

cplx ScatteringKernel::s_matrix(cplx z1, cplx z2) const {
  if (z1 == z2) return -1.0;
  if (singular(z1, z2)) throw SingularError("singular S-matrix at (z1, z2)");
  return -lambda(z1, z2) / lambda(z2, z1);
}

cplx ScatteringKernel::n_factor(cplx z1, cplx z2) const {
  if (z1 == z2) return 0.0;
  if (singular(z1, z2)) throw SingularError("singular decay coefficient at (z1, z2)");
  const auto& h = params_;
  const cplx prod = z1 * z2;
  return (z1 - z2) * (h.p + h.q * prod) * (h.t2 + h.t1 * prod) / (2.0 * lambda(z2, z1));
}

std::vector<int> reduced_word(std::span<const int> sigma) {
  // Bubble-sort sigma back to the identity; the swaps, read in reverse,
  // build sigma from the identity.
  std::vector<int> work(sigma.begin(), sigma.end());
  std::vector<int> swaps;
  for (std::size_t pass = 0; pass < work.size(); ++pass)
    for (std::size_t j = 0; j + 1 < work.size(); ++j)
      if (work[j] > work[j + 1]) {
        std::swap(work[j], work[j + 1]);
        swaps.push_back(static_cast<int>(j));
      }
  std::reverse(swaps.begin(), swaps.end());
  return swaps;
}

cplx ScatteringKernel::amplitude(std::span<const cplx> z, std::span<const int> sigma,
                                 std::span<const int> doubled) const {
  std::vector<int> current(sigma.size());
  std::iota(current.begin(), current.end(), 0);
  cplx a = 1.0;
  for (int j : reduced_word(sigma)) {
    a *= s_matrix(z[current[j]], z[current[j + 1]]);
    std::swap(current[j], current[j + 1]);
  }
  for (int j : doubled) a *= n_factor(z[sigma[j]], z[sigma[j + 1]]);
  return a;
}

namespace {

// Calls f(sigma) for every permutation of {0, ..., n-1} and sums the results.
template <std::size_t N, typename F>
cplx symmetrize(F&& f, double* scale) {
  std::array<int, N> sigma;
  std::iota(sigma.begin(), sigma.end(), 0);
  cplx total = 0.0;
  double largest = 0.0;
  do {
    const cplx term = f(sigma);
    total += term;
    largest = std::max(largest, std::abs(term));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  if (scale) *scale = largest;
  return total;
}

}  // namespace

// Cluster x_j = x_{j+1} = x, x_{j+2} = x + 1: a doubly excited site followed
// by a singly excited one.
cplx ScatteringKernel::constraint_e21(std::span<const cplx, 3> z, double* scale) const {
  const auto& h = params_;
  const cplx x21 = inv_.X21;
  return symmetrize<3>(
      [&](const std::array<int, 3>& s) {
        const cplx a = z[s[0]], b = z[s[1]], c = z[s[2]];
        const cplx diag = x21 - h.q * a - h.q * b - h.p / a - h.p / b - h.p / c + h.tp / (a * b);
        const cplx body = n_factor(a, b) * diag + n_factor(b, c) * h.s3 * b + h.t2 / a;
        return amplitude(std::span<const cplx>(z), s) * c * body;
      },
      scale);
}

// Cluster x_{j-1} = x - 1, x_j = x_{j+1} = x: a singly excited site followed
// by a doubly excited one.
cplx ScatteringKernel::constraint_e12(std::span<const cplx, 3> z, double* scale) const {
  const auto& h = params_;
  const cplx x12 = inv_.X12;
  return symmetrize<3>(
      [&](const std::array<int, 3>& s) {
        const cplx a = z[s[0]], b = z[s[1]], c = z[s[2]];
        const cplx diag = x12 - h.q * (a + b + c) - h.p / b - h.p / c + h.sp * b * c;
        const cplx body = n_factor(b, c) * diag + n_factor(a, b) * h.t3 / b + h.t1 * c;
        return amplitude(std::span<const cplx>(z), s) / a * body;
      },
      scale);
}

// Cluster of two adjacent doubly excited sites.
cplx ScatteringKernel::constraint_e22(std::span<const cplx, 4> z, double* scale) const {
  const auto& h = params_;
  // Diagonal energy of |..0 2 2 0..> relative to 4V is v02 + v22 + v20 - 4V.
  const cplx x22 = inv_.X22 + inv_.Y;
  return symmetrize<4>(
      [&](const std::array<int, 4>& s) {
        const cplx a = z[s[0]], b = z[s[1]], c = z[s[2]], d = z[s[3]];
        const cplx n01 = n_factor(a, b), n23 = n_factor(c, d);
        const cplx diag = x22 + h.tp / (a * b) - h.q * (a + b + c + d) + h.sp * c * d -
                          h.p * (1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d);
        const cplx body = n01 * n23 * diag + n23 * h.t2 / a + n01 * h.t1 * d;
        return amplitude(std::span<const cplx>(z), s) * c * d * body;
      },
      scale);
}

cplx lambda_fn(const HamiltonianParams& params, Momentum z1, Momentum z2) {
  return ScatteringKernel(params).lambda(z1.z, z2.z);
}

cplx s_matrix(const HamiltonianParams& params, Momentum z1, Momentum z2) {
  return ScatteringKernel(params).s_matrix(z1.z, z2.z);
}

cplx n_factor(const HamiltonianParams& params, Momentum z1, Momentum z2) {
  return ScatteringKernel(params).n_factor(z1.z, z2.z);
}

cplx constraint_e21(const HamiltonianParams& params, std::span<const Momentum, 3> z) {
  const std::array<cplx, 3> zs{z[0].z, z[1].z, z[2].z};
  return ScatteringKernel(params).constraint_e21(zs);
}

cplx constraint_e12(const HamiltonianParams& params, std::span<const Momentum, 3> z) {
  const std::array<cplx, 3> zs{z[0].z, z[1].z, z[2].z};
  return ScatteringKernel(params).constraint_e12(zs);
}

cplx constraint_e22(const HamiltonianParams& params, std::span<const Momentum, 4> z) {
  const std::array<cplx, 4> zs{z[0].z, z[1].z, z[2].z, z[3].z};
  return ScatteringKernel(params).constraint_e22(zs);
}

std::string to_string(ConstraintTag tag) {
  switch (tag) {
    case ConstraintTag::E21: return "E21";
    case ConstraintTag::E12: return "E12";
    case ConstraintTag::E22: return "E22";
  }
  return "?";
}

namespace {

// Uniform on the annulus 0.5 <= |z| <= 2.
cplx sample_momentum(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> area(0.25, 4.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  return std::polar(std::sqrt(area(rng)), angle(rng));
}

template <std::size_t N>
std::array<cplx, N> sample_tuple(const ScatteringKernel& kernel, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::array<cplx, N> z;
    for (auto& zi : z) zi = sample_momentum(rng);
    bool ok = true;
    for (std::size_t i = 0; i < N && ok; ++i)
      for (std::size_t j = 0; j < N && ok; ++j)
        if (i != j && kernel.singular(z[i], z[j])) ok = false;
    if (ok) return z;
  }
  throw SingularError("could not sample momenta away from Lambda singularities");
}

}  // namespace

SolvabilityVerdict is_cba_solvable(const HamiltonianParams& params,
                                   const SolvabilityOptions& options) {
  if (!params.has_rank_one_symmetry())
    throw HypothesisError(
        "rank-2 symmetry or no pseudo-excitation channel: outside classification hypotheses "
        "(condition (i): (t1, t2, s1, s2) = 0)");
  if (!params.has_excitation_channel())
    throw HypothesisError(
        "rank-2 symmetry or no pseudo-excitation channel: outside classification hypotheses "
        "(condition (ii): (p, q, t3, s3) = 0)");

  SolvabilityVerdict verdict;
  Frame frame;
  frame.time = params.t1 == 0.0 && params.t2 == 0.0;
  frame.charge = params.p == 0.0 && params.q == 0.0;
  verdict.frame = frame.word();
  const ScatteringKernel kernel(apply_frame(params, frame));

  std::mt19937_64 rng(options.seed);
  const auto record = [&](cplx value, double scale, ConstraintTag tag) {
    const double residual = scale > 0.0 ? std::abs(value) / scale : 0.0;
    if (residual > verdict.max_residual || std::isnan(residual)) {
      verdict.max_residual = std::isnan(residual) ? INFINITY : residual;
      if (verdict.max_residual > options.tolerance) verdict.failing_constraint = tag;
    }
  };
  for (int i = 0; i < options.samples; ++i) {
    double scale = 0.0;
    cplx value;
    const auto z3 = sample_tuple<3>(kernel, rng);
    value = kernel.constraint_e21(z3, &scale);
    record(value, scale, ConstraintTag::E21);
    value = kernel.constraint_e12(z3, &scale);
    record(value, scale, ConstraintTag::E12);
    const auto z4 = sample_tuple<4>(kernel, rng);
    value = kernel.constraint_e22(z4, &scale);
    record(value, scale, ConstraintTag::E22);
    ++verdict.samples;
  }
  verdict.solvable = verdict.max_residual <= options.tolerance;
  if (verdict.solvable) verdict.failing_constraint.reset();
  return verdict;
}

}  // namespace bethe
