#include "bethe_forge/families.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "bethe_forge/errors.hpp"

namespace bethe {

namespace {

constexpr const char* kDegenerate = "degenerate free-parameter point; choose alternative presentation";

cplx get(const FreeParams& free, const std::string& name) {
  auto it = free.find(name);
  if (it == free.end()) throw std::invalid_argument("missing free parameter '" + name + "'");
  return it->second;
}

cplx get_or(const FreeParams& free, const std::string& name, cplx fallback) {
  auto it = free.find(name);
  return it == free.end() ? fallback : it->second;
}

void require_nonzero(std::initializer_list<cplx> values) {
  for (cplx value : values)
    if (value == 0.0) throw SingularError(kDegenerate);
}

void check_names(Family family, const FreeParams& free, std::vector<std::string> allowed) {
  allowed.push_back("V");
  for (const auto& [name, value] : free) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
      throw std::invalid_argument("unknown free parameter '" + name + "' for family " +
                                  to_string(family));
  }
}

void check_branch(const FamilyTag& tag) {
  if (has_branch(tag.family)) {
    if (tag.branch != 1 && tag.branch != -1)
      throw std::invalid_argument("family " + to_string(tag.family) + " needs branch +1 or -1");
  } else if (tag.branch != 0) {
    throw std::invalid_argument("family " + to_string(tag.family) + " has no branch");
  }
}

HamiltonianParams finish(HamiltonianParams h, const DiagonalInvariants& inv) {
  h.v = diagonal_from_invariants(inv, 0.0);
  return h;
}

cplx imaginary_unit(int branch) { return branch > 0 ? cplx(0.0, 1.0) : cplx(0.0, -1.0); }

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::gZF: return "gZF";
    case Family::gIK: return "gIK";
    case Family::gB: return "gB";
    case Family::SpR: return "SpR";
    case Family::SB5: return "SB5";
    case Family::V17_1a: return "17V1a";
    case Family::V17_1b: return "17V1b";
    case Family::V17_2: return "17V2";
    case Family::V14_1: return "14V1";
    case Family::V14_2: return "14V2";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  for (Family family : kAllFamilies)
    if (to_string(family) == name) return family;
  // Accept the identifier spelling as well.
  static const std::map<std::string, Family> aliases = {
      {"V17_1a", Family::V17_1a}, {"V17_1b", Family::V17_1b}, {"V17_2", Family::V17_2},
      {"V14_1", Family::V14_1},   {"V14_2", Family::V14_2},
  };
  if (auto it = aliases.find(name); it != aliases.end()) return it->second;
  throw ParseError("unknown family '" + name + "'");
}

int vertex_count(Family family) {
  switch (family) {
    case Family::gZF:
    case Family::gIK:
    case Family::gB:
    case Family::SpR: return 19;
    case Family::V14_1:
    case Family::V14_2: return 14;
    default: return 17;
  }
}

bool has_branch(Family family) {
  switch (family) {
    case Family::gIK:
    case Family::gB:
    case Family::SB5:
    case Family::V17_1a:
    case Family::V17_1b:
    case Family::V14_1: return true;
    default: return false;
  }
}

std::string branch_name(Family family) {
  switch (family) {
    case Family::gIK: return "u";
    case Family::gB:
    case Family::SB5: return "J";
    case Family::V17_1a:
    case Family::V14_1: return "epsilon";
    case Family::V17_1b: return "I";
    default: return "";
  }
}

std::string to_string(const FamilyTag& tag) {
  std::string out = to_string(tag.family);
  if (!has_branch(tag.family)) return out;
  switch (tag.family) {
    case Family::gIK: return out + (tag.branch > 0 ? "[u+]" : "[u-]");
    case Family::gB:
    case Family::SB5: return out + (tag.branch > 0 ? "[J]" : "[J^2]");
    case Family::V17_1b: return out + (tag.branch > 0 ? "[I=+i]" : "[I=-i]");
    default: return out + (tag.branch > 0 ? "[eps=+1]" : "[eps=-1]");
  }
}

std::vector<std::string> free_parameter_names(Family family) {
  switch (family) {
    case Family::gZF: return {"p", "tp", "t2", "s1"};
    case Family::gIK: return {"p", "tp", "t2", "v"};
    case Family::gB: return {"p", "q", "t1", "t2", "tp"};
    case Family::SpR: return {"p", "q", "tp", "t2", "t3"};
    case Family::SB5: return {"p", "q", "t2", "Y"};
    case Family::V17_1a: return {"p", "q", "tp", "t2"};
    case Family::V17_1b: return {"p", "tp", "t2"};
    case Family::V17_2: return {"p", "q", "tp", "t2"};
    case Family::V14_1: return {"p", "tp", "t2", "X22"};
    case Family::V14_2: return {"p", "tp", "t2"};
  }
  return {};
}

std::vector<std::string> physical_parameter_names(Family family) {
  switch (family) {
    case Family::gZF: return {"tau_p", "sigma"};
    case Family::gIK: return {"tau_p", "v"};
    case Family::gB: return {"tau_p", "theta", "mu"};
    case Family::SpR: return {"tau_p", "theta", "tau_3"};
    case Family::SB5: return {"theta", "upsilon"};
    case Family::V17_1a:
    case Family::V17_2: return {"tau_p", "theta"};
    case Family::V14_1: return {"tau_p", "xi"};
    case Family::V17_1b:
    case Family::V14_2: return {"tau_p"};
  }
  return {};
}

cplx cube_root_of_unity(int branch) {
  const cplx j = std::polar(1.0, 2.0 * M_PI / 3.0);
  return branch > 0 ? j : j * j;
}

std::pair<cplx, cplx> ik_roots(cplx v) {
  const cplx a = std::pow(v, 4), b = 1.0 + 2.0 * v - v * v;
  if (a == 0.0) throw SingularError(kDegenerate);
  const cplx root = std::sqrt(b * b - 4.0 * a);
  return {(-b + root) / (2.0 * a), (-b - root) / (2.0 * a)};
}

namespace {

HamiltonianParams construct_17v1(const FreeParams& free) {
  const cplx p = get(free, "p"), q = get(free, "q"), tp = get(free, "tp"), t2 = get(free, "t2");
  const cplx t3 = get(free, "t3"), s3 = get(free, "s3");
  require_nonzero({p, tp});
  HamiltonianParams h;
  h.p = p, h.q = q, h.tp = tp, h.t2 = t2, h.t3 = t3, h.s3 = s3;
  h.sp = p * q / tp;
  h.t1 = q * t2 / p;
  DiagonalInvariants inv{};
  inv.V = get_or(free, "V", 0.0);
  inv.Y = p * p / tp + q * tp / p;
  inv.X12 = inv.Y + p * t3 / tp;
  inv.X21 = inv.Y + tp * s3 / p;
  inv.X22 = get(free, "X22");
  return finish(h, inv);
}

HamiltonianParams construct_14v1(const FreeParams& free) {
  const cplx p = get(free, "p"), tp = get(free, "tp"), t2 = get(free, "t2");
  require_nonzero({p, tp});
  HamiltonianParams h;
  h.p = p, h.tp = tp, h.t2 = t2, h.t3 = get(free, "t3");
  h.t1 = -p * p * t2 / (tp * tp);
  DiagonalInvariants inv{};
  inv.V = get_or(free, "V", 0.0);
  inv.X11 = inv.Y = p * p / tp;
  inv.X12 = 2.0 * p * p / tp;
  inv.X21 = get(free, "X21");
  inv.X22 = get(free, "X22");
  return finish(h, inv);
}

}  // namespace

HamiltonianParams construct(const FamilyTag& tag, const FreeParams& free) {
  check_branch(tag);
  check_names(tag.family, free, free_parameter_names(tag.family));
  DiagonalInvariants inv{};
  inv.V = get_or(free, "V", 0.0);
  HamiltonianParams h;

  switch (tag.family) {
    case Family::gZF: {
      const cplx p = get(free, "p"), tp = get(free, "tp"), t2 = get(free, "t2"), s1 = get(free, "s1");
      require_nonzero({tp});
      const cplx r = p * p / (tp * tp);
      h.p = p, h.tp = tp, h.t2 = t2, h.s1 = s1;
      h.q = h.s3 = p * r;
      h.t1 = r * t2;
      h.t3 = p;
      h.s2 = r * s1;
      h.sp = r * r * tp;
      inv.X11 = 0.0;
      inv.Y = 2.0 * p * p / tp;
      inv.X12 = inv.X21 = (3.0 * p * p - s1 * t2) / tp;
      inv.X22 = (4.0 * p * p - 2.0 * s1 * t2) / tp;
      return finish(h, inv);
    }
    case Family::gIK: {
      const cplx p = get(free, "p"), tp = get(free, "tp"), t2 = get(free, "t2"), v = get(free, "v");
      require_nonzero({tp, t2, v});
      const auto [u_plus, u_minus] = ik_roots(v);
      const cplx u = tag.branch > 0 ? u_plus : u_minus;
      const cplx u_other = tag.branch > 0 ? u_minus : u_plus;
      require_nonzero({u, u_other});
      const cplx r = p * p / tp;
      h.p = p, h.tp = tp, h.t2 = t2;
      h.sp = std::pow(v, 4) * std::pow(p, 4) / std::pow(tp, 3);
      h.s3 = h.q = v * v * std::pow(p, 3) / (tp * tp);
      h.t3 = p;
      h.t1 = p * p * t2 / (u * tp * tp);
      h.s1 = v * (v - 1.0) * p * p / t2;
      h.s2 = v * (v - 1.0) * std::pow(p, 4) / (u_other * t2 * tp * tp);
      inv.X11 = v * (v + 1.0) * r;
      inv.Y = (v * v + 1.0) * r;
      inv.X22 = 2.0 * (v + 1.0) * r;
      inv.X12 = (v * v + 1.0 - 1.0 / u_other) * r;
      inv.X21 = (v * v + 1.0 - 1.0 / u) * r;
      return finish(h, inv);
    }
    case Family::gB: {
      const cplx p = get(free, "p"), q = get(free, "q"), t1 = get(free, "t1"), t2 = get(free, "t2"),
                 tp = get(free, "tp");
      require_nonzero({t1, t2, tp});
      const cplx J = cube_root_of_unity(tag.branch), J2 = J * J;
      const cplx k = J * t1 * t1 * tp * tp - p * q * t2 * t2;
      h.p = p, h.q = q, h.t1 = t1, h.t2 = t2, h.tp = tp;
      h.s1 = J * k / (t1 * t2 * t2);
      h.s2 = J2 * k / std::pow(t2, 3);
      h.s3 = -J2 * p * t1 / t2;
      h.t3 = -J * q * t2 / t1;
      h.sp = J * t1 * t1 * tp / (t2 * t2);
      const cplx base = p * p * t1 * t1 * t2 + J * p * q * t1 * t2 * t2 + J2 * q * q * std::pow(t2, 3);
      const cplx den = t1 * t1 * t2 * tp;
      const cplx cubic = std::pow(t1, 3) * tp * tp;
      inv.Y = (base - J2 * cubic) / den;
      inv.X22 = base / den;
      inv.X11 = J2 * t1 * tp / t2;
      inv.X12 = (base + cubic) / den;
      inv.X21 = (base + J * cubic) / den;
      return finish(h, inv);
    }
    case Family::SpR: {
      const cplx p = get(free, "p"), q = get(free, "q"), tp = get(free, "tp"), t2 = get(free, "t2"),
                 t3 = get(free, "t3");
      require_nonzero({p, tp, t2});
      const cplx w = t3 * t3 - t3 * p + p * p;
      h.p = p, h.q = q, h.tp = tp, h.t2 = t2, h.t3 = t3;
      h.t1 = q * t2 / p;
      h.s1 = p * t3 / t2;
      h.s2 = q * t3 / t2;
      h.s3 = q * t3 / p;
      h.sp = q * w / (p * tp);
      inv.X11 = 0.0;
      inv.Y = inv.X12 = inv.X21 = inv.X22 = w / tp + q * tp / p;
      return finish(h, inv);
    }
    case Family::SB5: {
      const cplx p = get(free, "p"), q = get(free, "q"), t2 = get(free, "t2"), y = get(free, "Y");
      require_nonzero({p, t2});
      const cplx J = cube_root_of_unity(tag.branch), J2 = J * J;
      h.p = p, h.q = q, h.t2 = t2;
      h.t1 = q * t2 / p;
      h.s1 = -J2 * p * p / t2;
      h.s2 = -J * p * q / t2;
      h.t3 = -J2 * p;
      h.s3 = -J * q;
      inv.X11 = 0.0;
      inv.Y = inv.X12 = inv.X21 = inv.X22 = y;
      return finish(h, inv);
    }
    case Family::V17_1a: {
      const cplx p = get(free, "p"), q = get(free, "q"), tp = get(free, "tp");
      require_nonzero({p, tp});
      const double eps = tag.branch;
      FreeParams half = free;
      half["t3"] = eps * p;
      half["s3"] = eps * q;
      half["X22"] = (1.0 + eps) * (p * p / tp + q * tp / p);
      return construct_17v1(half);
    }
    case Family::V17_1b: {
      const cplx p = get(free, "p"), tp = get(free, "tp");
      require_nonzero({tp});
      const cplx I = imaginary_unit(tag.branch);
      FreeParams half = free;
      half["q"] = I * std::pow(p, 3) / (tp * tp);
      half["t3"] = I * p;
      half["s3"] = std::pow(p, 3) / (tp * tp);
      half["X22"] = (1.0 + I) * p * p / tp;
      return construct_17v1(half);
    }
    case Family::V17_2: {
      const cplx p = get(free, "p"), q = get(free, "q"), tp = get(free, "tp"), t2 = get(free, "t2");
      require_nonzero({p, tp});
      h.p = p, h.q = q, h.tp = tp, h.t2 = t2;
      h.sp = p * q / tp;
      h.t1 = -p * p * t2 / (tp * tp);
      h.s3 = q;
      h.t3 = p;
      inv.X11 = inv.Y = p * p / tp + q * tp / p;
      inv.X12 = 2.0 * p * p / tp + q * tp / p;
      inv.X21 = p * p / tp + 2.0 * q * tp / p;
      inv.X22 = 2.0 * inv.Y;
      return finish(h, inv);
    }
    case Family::V14_1: {
      const cplx p = get(free, "p"), tp = get(free, "tp"), x22 = get(free, "X22");
      require_nonzero({tp});
      FreeParams half = free;
      half["t3"] = static_cast<double>(tag.branch) * p;
      half["X21"] = x22 - p * p / tp;
      return construct_14v1(half);
    }
    case Family::V14_2: {
      const cplx p = get(free, "p"), tp = get(free, "tp"), t2 = get(free, "t2");
      require_nonzero({tp});
      h.p = p, h.tp = tp, h.t2 = t2;
      h.t1 = p * p * t2 / (tp * tp);
      h.t3 = -p;
      inv.X11 = 0.0;
      inv.X12 = inv.Y = p * p / tp;
      inv.X21 = inv.X22 = 0.0;
      return finish(h, inv);
    }
  }
  throw std::invalid_argument("unknown family");
}

HamiltonianParams construct_half_constrained(Family family, const FreeParams& free) {
  switch (family) {
    case Family::V17_1a:
    case Family::V17_1b:
      check_names(family, free, {"p", "q", "tp", "t2", "t3", "s3", "X22"});
      return construct_17v1(free);
    case Family::V17_2: {
      check_names(family, free, {"p", "q", "tp", "t2", "t3", "s3"});
      const cplx p = get(free, "p"), q = get(free, "q"), tp = get(free, "tp"), t2 = get(free, "t2");
      const cplx t3 = get(free, "t3"), s3 = get(free, "s3");
      require_nonzero({p, q, tp});
      HamiltonianParams h;
      h.p = p, h.q = q, h.tp = tp, h.t2 = t2, h.t3 = t3, h.s3 = s3;
      h.sp = p * q / tp;
      h.t1 = -p * p * t2 / (tp * tp);
      DiagonalInvariants inv{};
      inv.V = get_or(free, "V", 0.0);
      inv.X11 = inv.Y = p * p / tp + q * tp / p;
      inv.X12 = 2.0 * inv.Y - q * tp * t3 / (p * p);
      inv.X21 = 2.0 * inv.Y - p * p * s3 / (q * tp);
      inv.X22 = 2.0 * inv.Y;
      return finish(h, inv);
    }
    case Family::V14_1:
      check_names(family, free, {"p", "tp", "t2", "t3", "X21", "X22"});
      return construct_14v1(free);
    case Family::V14_2: {
      check_names(family, free, {"p", "tp", "t1", "t2"});
      const cplx p = get(free, "p"), tp = get(free, "tp"), t1 = get(free, "t1"), t2 = get(free, "t2");
      require_nonzero({p, tp, t2});
      HamiltonianParams h;
      h.p = p, h.tp = tp, h.t1 = t1, h.t2 = t2;
      h.t3 = -tp * tp * t1 / (p * t2);
      DiagonalInvariants inv{};
      inv.V = get_or(free, "V", 0.0);
      inv.X12 = inv.Y = p * p / tp;
      inv.X21 = inv.X22 = (p * p * t2 - tp * tp * t1) / (tp * t2);
      return finish(h, inv);
    }
    default:
      throw std::invalid_argument("no half-constrained presentation for family " + to_string(family));
  }
}

ReducedParams reduced_parameters(const HamiltonianParams& params) {
  if (params.p == 0.0) throw SingularError("p = 0: reparametrize via P/C/T frame");
  const cplx p = params.p;
  ReducedParams r;
  r.tau_p = params.tp / p;
  r.tau_2 = params.t2 / p;
  r.tau_3 = params.t3 / p;
  r.theta = params.q / p;
  r.upsilon = invariants(params).Y / p;
  r.sigma = params.s1 * params.t2 / (p * p);
  if (params.t2 != 0.0) r.mu = params.t1 / params.t2;
  return r;
}

namespace {

cplx need(const std::optional<cplx>& value, const char* name) {
  if (!value) throw SingularError(std::string("reduced parameter ") + name + " is undefined");
  return *value;
}

cplx checked_ratio(cplx num, cplx den) {
  if (den == 0.0) throw SingularError("singular S");
  return num / den;
}

// Branch-selected IK root and v, recovered from reduced parameters:
// v^2 = theta tau_p^2 and v (v - 1) = sigma.
std::pair<cplx, cplx> ik_data(const FamilyTag& tag, const ReducedParams& r) {
  const cplx tp = need(r.tau_p, "tau_p");
  const cplx v = need(r.theta, "theta") * tp * tp - need(r.sigma, "sigma");
  const auto [u_plus, u_minus] = ik_roots(v);
  return {v, tag.branch > 0 ? u_plus : u_minus};
}

cplx gb_lambda(cplx J, cplx mu, cplx tp, cplx theta, cplx z1, cplx z2) {
  const cplx J2 = J * J;
  return J * std::pow(mu, 4) * tp * tp * z1 * z1 * z2 * z2 - mu * mu * tp * theta * z1 * z2 * (z1 + z2) -
         J2 * std::pow(mu, 3) * tp * z1 * z2 * z2 + (mu - theta) * (mu - J2 * theta) * z1 * z2 +
         J2 * std::pow(mu, 3) * tp * tp * z2 * z2 - mu * mu * tp * (z1 + z2) - J * mu * tp * theta * z2 +
         mu * mu * tp * tp;
}

}  // namespace

cplx family_s_matrix(const FamilyTag& tag, const ReducedParams& r, cplx z1, cplx z2) {
  if (z1 == z2) return -1.0;
  switch (tag.family) {
    case Family::gZF: {
      const cplx tp = need(r.tau_p, "tau_p"), s = need(r.sigma, "sigma");
      return -checked_ratio(z1 * z2 - tp * (z1 + z2 - s * z2) + tp * tp,
                            z1 * z2 - tp * (z1 + z2 - s * z1) + tp * tp);
    }
    case Family::gIK: {
      const cplx tp = need(r.tau_p, "tau_p");
      const cplx v = ik_data(tag, r).first;
      const cplx num = (v * v * z1 * z2 - tp * (z1 + v * z2) + tp * tp) *
                       (v * v * z1 * z2 - tp * (1.0 + v) * z2 + tp * tp);
      const cplx den = (v * v * z1 * z2 - tp * (z2 + v * z1) + tp * tp) *
                       (v * v * z1 * z2 - tp * (1.0 + v) * z1 + tp * tp);
      return -checked_ratio(num, den);
    }
    case Family::gB: {
      const cplx J = cube_root_of_unity(tag.branch);
      const cplx mu = need(r.mu, "mu"), tp = need(r.tau_p, "tau_p"), th = need(r.theta, "theta");
      return -checked_ratio(gb_lambda(J, mu, tp, th, z1, z2), gb_lambda(J, mu, tp, th, z2, z1));
    }
    case Family::SpR: {
      const cplx tp = need(r.tau_p, "tau_p"), t3 = need(r.tau_3, "tau_3");
      const cplx w = t3 * t3 - t3 + 1.0;
      return -checked_ratio(w * z1 * z2 - tp * (z1 + z2 - t3 * z2) + tp * tp,
                            w * z1 * z2 - tp * (z1 + z2 - t3 * z1) + tp * tp);
    }
    case Family::SB5: {
      const cplx J = cube_root_of_unity(tag.branch), J2 = J * J;
      const cplx th = need(r.theta, "theta"), up = need(r.upsilon, "upsilon");
      return -checked_ratio(th * z1 * z2 * (z1 - J2 * z2) - up * z1 * z2 + z1 - J * z2,
                            th * z1 * z2 * (z2 - J2 * z1) - up * z1 * z2 + z2 - J * z1);
    }
    case Family::V17_1a:
    case Family::V17_1b:
    case Family::V14_2: return -1.0;
    case Family::V17_2: {
      const cplx tp = need(r.tau_p, "tau_p"), th = need(r.theta, "theta");
      return -checked_ratio(th * tp * z1 * z2 - (th * tp * tp + 1.0) * z2 + tp,
                            th * tp * z1 * z2 - (th * tp * tp + 1.0) * z1 + tp);
    }
    case Family::V14_1: {
      const cplx tp = need(r.tau_p, "tau_p");
      return -checked_ratio(z2 - tp, z1 - tp);
    }
  }
  throw std::invalid_argument("unknown family");
}

cplx family_n_factor(const FamilyTag& tag, const ReducedParams& r, cplx z1, cplx z2) {
  if (z1 == z2) return 0.0;
  const cplx t2 = need(r.tau_2, "tau_2");
  switch (tag.family) {
    case Family::gZF: {
      const cplx tp = need(r.tau_p, "tau_p"), s = need(r.sigma, "sigma");
      return checked_ratio(t2 * tp * (z1 - z2), 2.0 * (z1 * z2 - tp * (z1 + z2 - s * z1) + tp * tp));
    }
    case Family::gIK: {
      const cplx tp = need(r.tau_p, "tau_p");
      const auto [v, u] = ik_data(tag, r);
      const cplx den = 2.0 * (v * v * z1 * z2 - tp * (z2 + v * z1) + tp * tp) *
                       (v * v * z1 * z2 - tp * (1.0 + v) * z1 + tp * tp);
      return checked_ratio(t2 * tp * (z1 - z2) * (z1 * z2 / u + tp * tp), den);
    }
    case Family::gB: {
      const cplx J = cube_root_of_unity(tag.branch);
      const cplx mu = need(r.mu, "mu"), tp = need(r.tau_p, "tau_p"), th = need(r.theta, "theta");
      return checked_ratio(t2 * tp * mu * mu * (z1 - z2) * (1.0 + mu * z1 * z2),
                           2.0 * gb_lambda(J, mu, tp, th, z2, z1));
    }
    case Family::SpR: {
      const cplx tp = need(r.tau_p, "tau_p"), t3 = need(r.tau_3, "tau_3");
      const cplx w = t3 * t3 - t3 + 1.0;
      return checked_ratio(t2 * tp * (z1 - z2), 2.0 * (w * z1 * z2 - tp * (z1 + z2 - t3 * z1) + tp * tp));
    }
    case Family::SB5: {
      const cplx J = cube_root_of_unity(tag.branch), J2 = J * J;
      const cplx th = need(r.theta, "theta"), up = need(r.upsilon, "upsilon");
      return -checked_ratio(t2 * (z1 - z2) * (th * z1 * z2 + 1.0),
                            2.0 * (th * z1 * z2 * (z2 - J2 * z1) - up * z1 * z2 + z2 - J * z1));
    }
    case Family::V17_1a:
    case Family::V17_1b: {
      const cplx tp = need(r.tau_p, "tau_p");
      return checked_ratio(t2 * tp * (z1 - z2), 2.0 * (z1 - tp) * (z2 - tp));
    }
    case Family::V17_2: {
      const cplx tp = need(r.tau_p, "tau_p"), th = need(r.theta, "theta");
      return checked_ratio(-t2 * (z1 - z2) * (z1 * z2 - tp * tp),
                           2.0 * (th * tp * z1 * z2 - (th * tp * tp + 1.0) * z1 + tp) * (z1 - tp) * (z2 - tp));
    }
    case Family::V14_1: {
      const cplx tp = need(r.tau_p, "tau_p");
      return checked_ratio(t2 * (z1 - z2) * (z1 * z2 - tp * tp), 2.0 * (z1 - tp) * (z1 - tp) * (z2 - tp));
    }
    case Family::V14_2: {
      const cplx tp = need(r.tau_p, "tau_p");
      return checked_ratio(t2 * (z1 - z2) * (z1 * z2 + tp * tp), 2.0 * tp * (z1 - tp) * (z2 - tp));
    }
  }
  throw std::invalid_argument("unknown family");
}

std::string family_s_formula(Family family) {
  switch (family) {
    case Family::gZF: return "-(z1 z2 - tp(z1 + z2 - sigma z2) + tp^2) / (z1 z2 - tp(z1 + z2 - sigma z1) + tp^2)";
    case Family::gIK:
      return "-((v^2 z1 z2 - tp(z1 + v z2) + tp^2)(v^2 z1 z2 - tp(1+v) z2 + tp^2)) / "
             "((v^2 z1 z2 - tp(z2 + v z1) + tp^2)(v^2 z1 z2 - tp(1+v) z1 + tp^2))";
    case Family::gB: return "-L(z1, z2) / L(z2, z1) with L the reduced gB Lambda in (J, mu, tp, theta)";
    case Family::SpR:
      return "-((t3^2 - t3 + 1) z1 z2 - tp(z1 + z2 - t3 z2) + tp^2) / "
             "((t3^2 - t3 + 1) z1 z2 - tp(z1 + z2 - t3 z1) + tp^2)";
    case Family::SB5:
      return "-(theta z1 z2 (z1 - J^2 z2) - Ups z1 z2 + z1 - J z2) / "
             "(theta z1 z2 (z2 - J^2 z1) - Ups z1 z2 + z2 - J z1)";
    case Family::V17_1a:
    case Family::V17_1b:
    case Family::V14_2: return "-1";
    case Family::V17_2:
      return "-(theta tp z1 z2 - (theta tp^2 + 1) z2 + tp) / (theta tp z1 z2 - (theta tp^2 + 1) z1 + tp)";
    case Family::V14_1: return "-(z2 - tp) / (z1 - tp)";
  }
  return "";
}

std::string family_n_formula(Family family) {
  switch (family) {
    case Family::gZF: return "t2 tp (z1 - z2) / 2(z1 z2 - tp(z1 + z2 - sigma z1) + tp^2)";
    case Family::gIK:
      return "t2 tp (z1 - z2)(z1 z2 / u + tp^2) / "
             "2(v^2 z1 z2 - tp(z2 + v z1) + tp^2)(v^2 z1 z2 - tp(1+v) z1 + tp^2)";
    case Family::gB: return "t2 tp mu^2 (z1 - z2)(1 + mu z1 z2) / 2 L(z2, z1)";
    case Family::SpR: return "t2 tp (z1 - z2) / 2((t3^2 - t3 + 1) z1 z2 - tp(z1 + z2 - t3 z1) + tp^2)";
    case Family::SB5: return "-t2 (z1 - z2)(theta z1 z2 + 1) / 2(theta z1 z2 (z2 - J^2 z1) - Ups z1 z2 + z2 - J z1)";
    case Family::V17_1a:
    case Family::V17_1b: return "t2 tp (z1 - z2) / 2(z1 - tp)(z2 - tp)";
    case Family::V17_2:
      return "-t2 (z1 - z2)(z1 z2 - tp^2) / 2(theta tp z1 z2 - (theta tp^2 + 1) z1 + tp)(z1 - tp)(z2 - tp)";
    case Family::V14_1: return "t2 (z1 - z2)(z1 z2 - tp^2) / 2(z1 - tp)^2 (z2 - tp)";
    case Family::V14_2: return "t2 (z1 - z2)(z1 z2 + tp^2) / 2 tp (z1 - tp)(z2 - tp)";
  }
  return "";
}

namespace {

// Normalization N0 and squared middle gauge factor for the reduction of a
// family member.
std::pair<cplx, cplx> reduction_data(const FamilyTag& tag, const HamiltonianParams& h) {
  const cplx p = h.p;
  if (p == 0.0) throw SingularError("reduction needs p != 0");
  const cplx n_tp = h.tp / (p * p);
  switch (tag.family) {
    case Family::gZF: {
      const cplx sigma = h.s1 * h.t2 / (p * p);
      if (sigma == 0.0 || h.tp == 0.0)
        throw SingularError("reduction not valid for s1 = 0: sigma vanishes");
      return {n_tp, h.t2 * h.tp / (p * p * std::sqrt(sigma))};
    }
    case Family::gIK: {
      const ReducedParams r = reduced_parameters(h);
      const auto [u_plus, u_minus] = ik_roots(ik_data(tag, r).first);
      const cplx v = ik_data(tag, r).first;
      const cplx u = tag.branch > 0 ? u_minus : u_plus;
      if (v == 1.0) throw SingularError("reduction not valid for v = 1");
      return {n_tp, (h.t2 / p) * std::sqrt(v * u / (v - 1.0))};
    }
    case Family::gB: {
      if (h.t1 == 0.0 || h.t2 == 0.0) throw SingularError("reduction needs t1, t2 != 0");
      return {std::sqrt(h.t2 / h.t1) / p, h.t2 / p};
    }
    case Family::SB5: {
      const cplx y = invariants(h).Y;
      if (y == 0.0) throw SingularError("reduction needs Y != 0");
      return {1.0 / y, h.t2 / p};
    }
    default:
      if (h.tp == 0.0) throw SingularError("reduction needs tp != 0");
      return {n_tp, h.t2 / p};
  }
}

double relative_mismatch(const HamiltonianParams& a, const HamiltonianParams& b) {
  const DiagonalInvariants ia = invariants(a), ib = invariants(b);
  const std::array<cplx, 5> da{ia.X11, ia.Y, ia.X12, ia.X21, ia.X22};
  const std::array<cplx, 5> db{ib.X11, ib.Y, ib.X12, ib.X21, ib.X22};
  double diff = 0.0, scale = 0.0;
  for (const auto& field : kOffDiagonalFields) {
    diff = std::max(diff, std::abs(a.*field.member - b.*field.member));
    scale = std::max(scale, std::abs(b.*field.member));
  }
  for (std::size_t i = 0; i < da.size(); ++i) {
    diff = std::max(diff, std::abs(da[i] - db[i]));
    scale = std::max(scale, std::abs(db[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

// Reads the free parameters of a family off the designated entries.
std::optional<FreeParams> read_anchors(const HamiltonianParams& h, Family family) {
  const DiagonalInvariants inv = invariants(h);
  FreeParams free{{"V", inv.V}};
  switch (family) {
    case Family::gZF:
      free.insert({{"p", h.p}, {"tp", h.tp}, {"t2", h.t2}, {"s1", h.s1}});
      break;
    case Family::gIK: {
      if (h.p == 0.0) return std::nullopt;
      const cplx v = h.q * h.tp * h.tp / std::pow(h.p, 3) - h.s1 * h.t2 / (h.p * h.p);
      free.insert({{"p", h.p}, {"tp", h.tp}, {"t2", h.t2}, {"v", v}});
      break;
    }
    case Family::gB:
      free.insert({{"p", h.p}, {"q", h.q}, {"t1", h.t1}, {"t2", h.t2}, {"tp", h.tp}});
      break;
    case Family::SpR:
      free.insert({{"p", h.p}, {"q", h.q}, {"tp", h.tp}, {"t2", h.t2}, {"t3", h.t3}});
      break;
    case Family::SB5:
      free.insert({{"p", h.p}, {"q", h.q}, {"t2", h.t2}, {"Y", inv.Y}});
      break;
    case Family::V17_1a:
    case Family::V17_2:
      free.insert({{"p", h.p}, {"q", h.q}, {"tp", h.tp}, {"t2", h.t2}});
      break;
    case Family::V17_1b:
    case Family::V14_2:
      free.insert({{"p", h.p}, {"tp", h.tp}, {"t2", h.t2}});
      break;
    case Family::V14_1:
      free.insert({{"p", h.p}, {"tp", h.tp}, {"t2", h.t2}, {"X22", inv.X22}});
      break;
  }
  return free;
}

}  // namespace

std::optional<FamilyMatch> fit_family(const HamiltonianParams& params, const FamilyTag& tag,
                                      double tolerance) {
  const auto free = read_anchors(params, tag.family);
  if (!free) return std::nullopt;
  HamiltonianParams candidate;
  try {
    candidate = construct(tag, *free);
  } catch (const SingularError&) {
    return std::nullopt;
  }
  const double residual = relative_mismatch(candidate, params);
  if (!(residual <= tolerance)) return std::nullopt;
  FamilyMatch match;
  match.tag = tag;
  match.free_params = *free;
  match.fit_residual = residual;
  try {
    match.gauge = {1.0, std::sqrt(reduction_data(tag, params).second), 1.0};
  } catch (const SingularError&) {
    match.gauge = {1.0, 1.0, 1.0};
  }
  return match;
}

Classification classify(const HamiltonianParams& params, const ClassifyOptions& options) {
  Classification result;
  result.verdict = is_cba_solvable(params, options.solvability);
  if (!result.verdict.solvable) return result;

  std::set<Family> matched;
  for (Family family : kAllFamilies) {
    const std::vector<int> branches = has_branch(family) ? std::vector<int>{1, -1} : std::vector<int>{0};
    for (const Frame& frame : all_frames()) {
      const HamiltonianParams framed = apply_frame(params, frame);
      for (int branch : branches) {
        auto match = fit_family(framed, FamilyTag{family, branch}, options.tolerance);
        if (!match) continue;
        match->frame = frame;
        result.all_matches.push_back(*match);
        matched.insert(family);
      }
    }
  }
  if (!result.all_matches.empty()) result.match = result.all_matches.front();
  result.degenerate = matched.size() > 1;
  return result;
}

ReducedHamiltonian reduce_hamiltonian(const HamiltonianParams& params, const FamilyMatch& match) {
  const HamiltonianParams framed = canonicalize(apply_frame(params, match.frame));
  const auto [normalization, g1_squared] = reduction_data(match.tag, framed);
  if (g1_squared == 0.0) throw SingularError("reduction gauge is singular");

  HamiltonianParams shifted = framed;
  const cplx V = invariants(framed).V;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) shifted.v[i][j] -= 0.5 * V * static_cast<double>(i + j);

  const std::array<cplx, 3> gauge{1.0, std::sqrt(g1_squared), 1.0};
  HamiltonianParams gauged = apply_gauge(shifted, gauge);
  Matrix9 m = two_site_matrix(symmetric_telescoping_frame(gauged)) * normalization;

  ReducedHamiltonian out;
  out.matrix = m;
  out.reduced = reduced_parameters(framed);
  out.normalization = normalization;
  out.gauge = gauge;
  return out;
}

}  // namespace bethe
