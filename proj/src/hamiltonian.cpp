#include "bethe_forge/hamiltonian.hpp"

#include <cstdlib>
#include <string>

#include "bethe_forge/errors.hpp"

namespace bethe {

const std::array<OffDiagonalField, 10> kOffDiagonalFields = {{
    {"p", &HamiltonianParams::p, 1, 3},
    {"q", &HamiltonianParams::q, 3, 1},
    {"t1", &HamiltonianParams::t1, 6, 4},
    {"t2", &HamiltonianParams::t2, 2, 4},
    {"s1", &HamiltonianParams::s1, 4, 6},
    {"s2", &HamiltonianParams::s2, 4, 2},
    {"t3", &HamiltonianParams::t3, 5, 7},
    {"s3", &HamiltonianParams::s3, 7, 5},
    {"tp", &HamiltonianParams::tp, 2, 6},
    {"sp", &HamiltonianParams::sp, 6, 2},
}};

bool HamiltonianParams::has_rank_one_symmetry() const {
  return t1 != 0.0 || t2 != 0.0 || s1 != 0.0 || s2 != 0.0;
}

bool HamiltonianParams::has_excitation_channel() const {
  return p != 0.0 || q != 0.0 || t3 != 0.0 || s3 != 0.0;
}

int ChainSpec::max_length() {
  if (const char* env = std::getenv("BETHE_FORGE_LMAX")) {
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end != env && value >= 2 && value <= 19) return static_cast<int>(value);
  }
  return kDefaultMaxLength;
}

Matrix9 two_site_matrix(const HamiltonianParams& params) {
  Matrix9 h = Matrix9::Zero();
  for (const auto& field : kOffDiagonalFields) h(field.row, field.col) = params.*field.member;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h(3 * i + j, 3 * i + j) = params.v[i][j];
  return h;
}

HamiltonianParams params_from_matrix(const Matrix9& h) {
  HamiltonianParams params;
  for (const auto& field : kOffDiagonalFields) params.*field.member = h(field.row, field.col);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) params.v[i][j] = h(3 * i + j, 3 * i + j);
  return params;
}

DiagonalInvariants invariants(const HamiltonianParams& params) {
  const auto& v = params.v;
  DiagonalInvariants inv;
  inv.V = v[0][1] + v[1][0] - 2.0 * v[0][0];
  inv.X11 = v[1][1] - v[0][0] - inv.V;
  inv.Y = v[0][2] + v[2][0] - 2.0 * v[0][0] - 2.0 * inv.V;
  inv.X12 = v[1][2] + v[2][0] - v[1][0] - v[0][0] - 2.0 * inv.V;
  inv.X21 = v[2][1] + v[0][2] - v[0][1] - v[0][0] - 2.0 * inv.V;
  inv.X22 = v[2][2] - v[0][0] - 2.0 * inv.V;
  return inv;
}

std::array<std::array<cplx, 3>, 3> diagonal_from_invariants(const DiagonalInvariants& inv,
                                                            cplx v00) {
  // Solve the invariant definitions with v01 = v10 and v02 = v20; the
  // remaining pair (v12, v21) is fixed by X12 + X21 and X12 - X21.
  std::array<std::array<cplx, 3>, 3> v{};
  v[0][0] = v00;
  v[0][1] = v[1][0] = v00 + 0.5 * inv.V;
  v[1][1] = inv.X11 + v00 + inv.V;
  v[0][2] = v[2][0] = v00 + inv.V + 0.5 * inv.Y;
  // X12 = v12 + v20 - v10 - v00 - 2V, X21 = v21 + v02 - v01 - v00 - 2V.
  v[1][2] = inv.X12 - v[2][0] + v[1][0] + v00 + 2.0 * inv.V;
  v[2][1] = inv.X21 - v[0][2] + v[0][1] + v00 + 2.0 * inv.V;
  v[2][2] = inv.X22 + v00 + 2.0 * inv.V;
  return v;
}

HamiltonianParams canonicalize(const HamiltonianParams& params) {
  HamiltonianParams out = params;
  const cplx shift = params.v[0][0];
  for (auto& row : out.v)
    for (auto& entry : row) entry -= shift;
  return out;
}

HamiltonianParams symmetric_telescoping_frame(const HamiltonianParams& params) {
  HamiltonianParams out = params;
  out.v = diagonal_from_invariants(invariants(params), params.v[0][0]);
  return out;
}

HamiltonianParams apply_parity(const HamiltonianParams& params) {
  HamiltonianParams out;
  out.p = params.q;
  out.q = params.p;
  out.t1 = params.t2;
  out.t2 = params.t1;
  out.s1 = params.s2;
  out.s2 = params.s1;
  out.t3 = params.s3;
  out.s3 = params.t3;
  out.tp = params.sp;
  out.sp = params.tp;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.v[i][j] = params.v[j][i];
  return out;
}

HamiltonianParams apply_time_reversal(const HamiltonianParams& params) {
  HamiltonianParams out = params;
  std::swap(out.p, out.q);
  std::swap(out.t1, out.s1);
  std::swap(out.t2, out.s2);
  std::swap(out.t3, out.s3);
  std::swap(out.tp, out.sp);
  return out;
}

HamiltonianParams apply_charge_conjugation(const HamiltonianParams& params) {
  const Matrix9 h = two_site_matrix(params);
  const auto flip = [](int index) {
    const int i1 = index / 3, i2 = index % 3;
    return 3 * (2 - i1) + (2 - i2);
  };
  Matrix9 out = Matrix9::Zero();
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) out(flip(r), flip(c)) = h(r, c);
  return params_from_matrix(out);
}

HamiltonianParams apply_gauge(const HamiltonianParams& params, const std::array<cplx, 3>& g) {
  for (const cplx& factor : g)
    if (factor == 0.0) throw SingularError("singular gauge");
  const Matrix9 h = two_site_matrix(params);
  Matrix9 out;
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c)
      out(r, c) = r == c ? h(r, c) : h(r, c) * g[r / 3] * g[r % 3] / (g[c / 3] * g[c % 3]);
  // The diagonal is untouched, so copy it rather than round-trip it.
  HamiltonianParams gauged = params_from_matrix(out);
  gauged.v = params.v;
  return gauged;
}

HamiltonianParams apply_telescopic(const HamiltonianParams& params, const std::array<cplx, 3>& a) {
  HamiltonianParams out = params;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.v[i][j] = params.v[i][j] + a[i] - a[j];
  return out;
}

std::string Frame::word() const {
  std::string w;
  if (parity) w += 'P';
  if (charge) w += 'C';
  if (time) w += 'T';
  return w;
}

Frame Frame::from_word(std::string_view word) {
  Frame frame;
  for (char letter : word) {
    switch (letter) {
      case 'P': frame.parity = !frame.parity; break;
      case 'C': frame.charge = !frame.charge; break;
      case 'T': frame.time = !frame.time; break;
      default: throw ParseError("invalid frame letter '" + std::string(1, letter) + "'");
    }
  }
  return frame;
}

const std::array<Frame, 8>& all_frames() {
  static const std::array<Frame, 8> frames = {{
      {false, false, false},
      {true, false, false},
      {false, true, false},
      {false, false, true},
      {true, true, false},
      {true, false, true},
      {false, true, true},
      {true, true, true},
  }};
  return frames;
}

HamiltonianParams apply_frame(const HamiltonianParams& params, const Frame& frame) {
  HamiltonianParams out = params;
  if (frame.parity) out = apply_parity(out);
  if (frame.charge) out = apply_charge_conjugation(out);
  if (frame.time) out = apply_time_reversal(out);
  return out;
}

namespace {

std::uint64_t pow3(int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

void check_length(const ChainSpec& spec) {
  if (spec.length < 2) throw ModeError("chain length must be at least 2");
  if (spec.length > ChainSpec::max_length())
    throw ModeError("chain too large: L = " + std::to_string(spec.length) +
                    " exceeds L_max = " + std::to_string(ChainSpec::max_length()));
}

}  // namespace

int excitation_number(std::uint64_t state, int length) {
  int total = 0;
  for (int i = 0; i < length; ++i) {
    total += static_cast<int>(state % 3);
    state /= 3;
  }
  return total;
}

std::vector<int> site_values(std::uint64_t state, int length) {
  std::vector<int> values(length);
  for (int i = length - 1; i >= 0; --i) {
    values[i] = static_cast<int>(state % 3);
    state /= 3;
  }
  return values;
}

SparseMatrixXc chain_matrix(const HamiltonianParams& params, const ChainSpec& spec) {
  check_length(spec);
  const int length = spec.length;
  const std::uint64_t dim = pow3(length);
  const Matrix9 h = two_site_matrix(params);

  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * (length + 1));
  for (std::uint64_t col = 0; col < dim; ++col) {
    cplx diagonal = 0.0;
    for (int j = 0; j < length; ++j) {
      const int k = (j + 1) % length;
      // Site j (0-based) carries weight 3^(L-1-j).
      const std::uint64_t wj = pow3(length - 1 - j), wk = pow3(length - 1 - k);
      const int a = static_cast<int>((col / wj) % 3), b = static_cast<int>((col / wk) % 3);
      const int in = 3 * a + b;
      diagonal += h(in, in);
      for (int out = 0; out < 9; ++out) {
        if (out == in || h(out, in) == 0.0) continue;
        const int c = out / 3, d = out % 3;
        const std::uint64_t row = col + (static_cast<std::int64_t>(c) - a) * wj +
                                  (static_cast<std::int64_t>(d) - b) * wk;
        triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), h(out, in));
      }
    }
    if (diagonal != 0.0) triplets.emplace_back(static_cast<int>(col), static_cast<int>(col), diagonal);
  }
  SparseMatrixXc m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

std::vector<std::uint64_t> sector_basis(const ChainSpec& spec, int m) {
  check_length(spec);
  std::vector<std::uint64_t> states;
  if (m < 0 || m > 2 * spec.length) return states;
  const std::uint64_t dim = pow3(spec.length);
  for (std::uint64_t s = 0; s < dim; ++s)
    if (excitation_number(s, spec.length) == m) states.push_back(s);
  return states;
}

}  // namespace bethe
