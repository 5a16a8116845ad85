#include "wallach/linearize.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace wallach {

namespace {

std::complex<double> csqrt(double v) { return std::sqrt(std::complex<double>(v, 0.0)); }

Scalar monomial(const MetricPoint& x, int e1, int e2, int e3) {
  return pow(x[0], e1) * pow(x[1], e2) * pow(x[2], e3);
}

void require_equilibrium(const Parameters& p, const MetricPoint& x) {
  if (residual_norm(p, x) > 1e-9) throw DomainError("not an equilibrium: " + x.str() + " for " + p.str());
}

}  // namespace

Scalar& F2Form::coeff(int e1, int e2, int e3) {
  for (auto& t : terms) {
    if (t.e1 == e1 && t.e2 == e2 && t.e3 == e3) return t.c;
  }
  throw std::out_of_range("no such monomial in F2");
}

const Scalar& F2Form::coeff(int e1, int e2, int e3) const {
  return const_cast<F2Form*>(this)->coeff(e1, e2, e3);
}

F2Form f2_form(const Parameters& p) {
  const Scalar& a1 = p.a(0);
  const Scalar& a2 = p.a(1);
  const Scalar& a3 = p.a(2);
  const Scalar& A = p.A();
  const Scalar A3 = A * A * A;
  const Scalar s3 = a1 * a2 * a3;
  return F2Form{{{
      {4, 0, 0, a1 * a1 * a2 * a3 * (2 * A + a2 * a3) - A3},
      {0, 4, 0, a1 * a2 * a2 * a3 * (2 * A + a1 * a3) - A3},
      {0, 0, 4, a1 * a2 * a3 * a3 * (2 * A + a1 * a2) - A3},
      {3, 1, 0, -2 * a1 * a1 * (A + a2 * a3) * a2},
      {3, 0, 1, -2 * a1 * a1 * (A + a2 * a3) * a3},
      {1, 3, 0, -2 * a2 * a2 * (A + a1 * a3) * a1},
      {0, 3, 1, -2 * a2 * a2 * (A + a1 * a3) * a3},
      {1, 0, 3, -2 * a3 * a3 * (A + a1 * a2) * a1},
      {0, 1, 3, -2 * a3 * a3 * (A + a1 * a2) * a2},
      {2, 2, 0,
       a1 * a2 * (2 * (3 * a1 * a2 + a2 * a2 + a1 * a1) * a3 * a3 + 2 * (a1 + a2) * a1 * a2 * a3 + a1 * a2) +
           2 * A3},
      {2, 0, 2,
       a1 * a3 * (2 * (3 * a1 * a3 + a3 * a3 + a1 * a1) * a2 * a2 + 2 * (a1 + a3) * a1 * a2 * a3 + a1 * a3) +
           2 * A3},
      {0, 2, 2,
       a2 * a3 * (2 * (3 * a2 * a3 + a3 * a3 + a2 * a2) * a1 * a1 + 2 * (a2 + a3) * a1 * a2 * a3 + a2 * a3) +
           2 * A3},
      {2, 1, 1, -2 * s3 * (A + a2 * a3 - a1)},
      {1, 2, 1, -2 * s3 * (A + a1 * a3 - a2)},
      {1, 1, 2, -2 * s3 * (A + a1 * a2 - a3)},
  }}};
}

Scalar evaluate(const F2Form& form, const MetricPoint& x) {
  Scalar sum(0);
  for (const auto& t : form.terms) sum += t.c * monomial(x, t.e1, t.e2, t.e3);
  return sum;
}

Scalar f1(const Parameters& p, const MetricPoint& x) {
  const Scalar& a1 = p.a(0);
  const Scalar& a2 = p.a(1);
  const Scalar& a3 = p.a(2);
  const Scalar& A = p.A();
  return a1 * a2 * x[0] * x[1] + a1 * a3 * x[0] * x[2] + a2 * a3 * x[1] * x[2] -
         (A + a2 * a3) * a1 * x[0] * x[0] - (A + a1 * a3) * a2 * x[1] * x[1] - (A + a1 * a2) * a3 * x[2] * x[2];
}

Scalar f2(const Parameters& p, const MetricPoint& x) { return evaluate(f2_form(p), x); }

Linearization linearize_at(const Parameters& p, const MetricPoint& x, const F2Form& form) {
  require_equilibrium(p, x);
  const Scalar& A = p.A();
  const Scalar prod = x[0] * x[1] * x[2];
  Linearization lin;
  lin.rho = 2 * f1(p, x) / (A * prod);
  lin.delta = evaluate(form, x) / (A * A * prod * prod);
  lin.sigma = lin.rho * lin.rho - 4 * lin.delta;
  const double rho = lin.rho.to_double();
  const std::complex<double> root = csqrt(lin.sigma.to_double());
  std::complex<double> l1 = (rho - root) / 2.0;
  std::complex<double> l2 = (rho + root) / 2.0;
  if (std::abs(l1) > std::abs(l2)) std::swap(l1, l2);
  lin.lambda1 = l1;
  lin.lambda2 = l2;
  lin.degeneracy = std::abs(lin.delta.to_double()) * std::cbrt(prod.to_double() * prod.to_double());
  return lin;
}

Linearization linearize_at(const Parameters& p, const MetricPoint& x) { return linearize_at(p, x, f2_form(p)); }

Linearization linearize_at(const Parameters& p, const EquilibriumRay& ray) { return linearize_at(p, ray.rep); }

Classification classify(const Linearization& lin) {
  Classification c;
  const bool exact = lin.delta.is_exact() && lin.rho.is_exact();
  if (exact) {
    if (lin.delta.is_zero()) {
      c.kind = PointKind::Degenerate;
      c.semi_hyperbolic_candidate = !lin.rho.is_zero();
      return c;
    }
  } else {
    c.near_degenerate = lin.degeneracy <= kNearDegenerate;
    if (lin.delta.is_zero()) {
      c.kind = PointKind::Degenerate;
      c.semi_hyperbolic_candidate = std::abs(lin.rho.to_double()) > kNearDegenerate;
      return c;
    }
    c.semi_hyperbolic_candidate = c.near_degenerate && std::abs(lin.rho.to_double()) > kNearDegenerate;
  }
  const int ds = lin.delta.sign();
  if (ds < 0) {
    c.kind = PointKind::Saddle;
    return c;
  }
  const double rho = lin.rho.to_double();
  const bool real_eigen = exact ? lin.sigma.sign() >= 0
                                : lin.sigma.to_double() >= -1e-12 * std::max(1.0, rho * rho);
  if (real_eigen) {
    c.kind = lin.rho.sign() < 0 ? PointKind::StableNode : PointKind::UnstableNode;
  } else {
    c.kind = lin.rho.is_zero() ? PointKind::WeakFocusOrCenter : PointKind::StrongFocus;
  }
  return c;
}

std::array<std::array<Scalar, 3>, 3> g_form_matrix(const Parameters& p) {
  const Scalar& a1 = p.a(0);
  const Scalar& a2 = p.a(1);
  const Scalar& a3 = p.a(2);
  const Scalar& A = p.A();
  const Scalar xy = -(a1 * a3 + a2 * a3);
  const Scalar yz = -(a1 * a2 + a1 * a3);
  const Scalar xz = -(a2 * a3 + a1 * a2);
  return {{{A + a1 * a1, xy, xz}, {xy, A + a2 * a2, yz}, {xz, yz, A + a3 * a3}}};
}

Scalar sigma_expression(const Parameters& p, const MetricPoint& x) {
  const auto m = g_form_matrix(p);
  const std::array<Scalar, 3> sq{x[0] * x[0], x[1] * x[1], x[2] * x[2]};
  Scalar g(0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) g += m[i][j] * sq[i] * sq[j];
  }
  return 4 * g / (sq[0] * sq[1] * sq[2]);
}

Parameters sigma_zero_family(SigmaFamily which, const Scalar& s, int k) {
  if (which == SigmaFamily::Equal) {
    if (!(s.sign() > 0) || s > Scalar::ratio(1, 2)) throw DomainError("Equal family needs s in (0, 1/2]");
    return Parameters(s, s, s);
  }
  const double lo = std::sqrt(2.0 * std::sqrt(2.0) - 2.0) / 2.0;
  const double hi = std::sqrt(2.0) / 2.0;
  const double sd = s.to_double();
  if (!(sd > lo && sd < hi)) throw DomainError("TwoEqual family needs s in (" + std::to_string(lo) + ", " +
                                               std::to_string(hi) + "), got " + s.str());
  if (k < 1 || k > 3) throw DomainError("distinguished index k must be 1, 2 or 3");
  const Scalar s2 = s * s;
  const Scalar pair = (2 * s2 - 1) * (2 * s2 - 1) / (8 * s2);
  const Scalar single = (4 * s2 * s2 + 4 * s2 - 1) / (8 * s2);
  std::array<Scalar, 3> a{pair, pair, pair};
  a[static_cast<std::size_t>(k - 1)] = single;
  return Parameters(a[0], a[1], a[2]);
}

double sigma_zero_q(double s) {
  const double s2 = s * s;
  const double den = (6 * s2 - 1) * (2 * s2 + 1);
  return std::pow(2 * s2, -2 * (4 * s2 * s2 + 4 * s2 - 1) / den) * std::pow(1 - 2 * s2, -(2 * s2 - 1) * (2 * s2 - 1) / den);
}

std::vector<SigmaZeroPoint> sigma_zero_points(SigmaFamily which, const Scalar& s) {
  std::vector<SigmaZeroPoint> out;
  if (which == SigmaFamily::Equal) {
    out.push_back({0, sigma_zero_family(which, s), MetricPoint(Scalar(1), Scalar(1), Scalar(1))});
    return out;
  }
  const double sd = s.to_double();
  const double q = sigma_zero_q(sd);
  const double big = 2 * sd * sd * q;
  const double small = (1 - 2 * sd * sd) * q;
  const std::array<std::array<double, 2>, 3> xy{{{small, big}, {big, small}, {big, big}}};
  for (int k = 1; k <= 3; ++k) {
    Parameters p = sigma_zero_family(which, s, k);
    const auto& v = xy[static_cast<std::size_t>(k - 1)];
    out.push_back({k, p, lift_to_unit_volume(p, Scalar(v[0]), Scalar(v[1]))});
  }
  return out;
}

Matrix2 jacobian_2d_fd(const Parameters& p, double x1, double x2) {
  if (!(x1 > 0.0) || !(x2 > 0.0)) throw DomainError("jacobian_2d_fd needs x1, x2 > 0");
  const auto a = p.to_doubles();
  const std::array<double, 2> x{x1, x2};
  Matrix2 j{};
  for (std::size_t c = 0; c < 2; ++c) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[c]));
    auto up = x;
    auto dn = x;
    up[c] += h;
    dn[c] -= h;
    if (up[c] == x[c] || !(dn[c] > 0.0)) throw DomainError("finite-difference step underflow");
    const auto fu = formula::field2(a, up[0], up[1]);
    const auto fd = formula::field2(a, dn[0], dn[1]);
    for (std::size_t r = 0; r < 2; ++r) j[r][c] = (fu[r] - fd[r]) / (up[c] - dn[c]);
  }
  return j;
}

Matrix3 jacobian_3d_fd(const Parameters& p, const std::array<double, 3>& x) {
  const auto a = p.to_doubles();
  Matrix3 j{};
  for (std::size_t c = 0; c < 3; ++c) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[c]));
    auto up = x;
    auto dn = x;
    up[c] += h;
    dn[c] -= h;
    if (up[c] == x[c] || !(dn[c] > 0.0)) throw DomainError("finite-difference step underflow");
    const auto fu = formula::field3<double>(a, up);
    const auto fd = formula::field3<double>(a, dn);
    for (std::size_t r = 0; r < 3; ++r) j[r][c] = (fu[r] - fd[r]) / (up[c] - dn[c]);
  }
  return j;
}

std::vector<std::complex<double>> eigenvalues(const Matrix3& m) {
  Eigen::Matrix3d e;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) e(r, c) = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  Eigen::EigenSolver<Eigen::Matrix3d> solver(e, false);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < 3; ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

const char* to_string(PointKind kind) {
  switch (kind) {
    case PointKind::StableNode: return "stable_node";
    case PointKind::UnstableNode: return "unstable_node";
    case PointKind::Saddle: return "saddle";
    case PointKind::StrongFocus: return "strong_focus";
    case PointKind::WeakFocusOrCenter: return "weak_focus_or_center";
    case PointKind::Degenerate: return "degenerate";
  }
  return "?";
}

}  // namespace wallach
