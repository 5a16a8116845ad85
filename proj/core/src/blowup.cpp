#include "wallach/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wallach/flow.hpp"

namespace wallach {

namespace {

constexpr int kOrder = 3;

/// Bivariate Taylor polynomial in (x, y) truncated above total degree 3.
class Jet {
 public:
  Jet() = default;
  Jet(int v) : Jet(Scalar(v)) {}  // NOLINT(google-explicit-constructor)
  Jet(Scalar v) { c_[0][0] = std::move(v); }  // NOLINT(google-explicit-constructor)

  static Jet variable(const Scalar& base, int which) {
    Jet j(base);
    if (which == 0) {
      j.c_[1][0] = Scalar(1);
    } else {
      j.c_[0][1] = Scalar(1);
    }
    return j;
  }

  const Scalar& at(int i, int j) const { return c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  Scalar& at(int i, int j) { return c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= kOrder; ++i) {
      for (int j = 0; i + j <= kOrder; ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
    }
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= kOrder; ++i) {
      for (int j = 0; i + j <= kOrder; ++j) r.at(i, j) = a.at(i, j) - b.at(i, j);
    }
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= kOrder; ++i) {
      for (int j = 0; i + j <= kOrder; ++j) {
        Scalar s(0);
        for (int i1 = 0; i1 <= i; ++i1) {
          for (int j1 = 0; j1 <= j; ++j1) s += a.at(i1, j1) * b.at(i - i1, j - j1);
        }
        r.at(i, j) = s;
      }
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * pow(b, Scalar(-1)); }

  /// b^r = b0^r (1 + u)^r expanded by the binomial series.
  friend Jet pow(const Jet& b, const Scalar& r) {
    const Scalar& b0 = b.at(0, 0);
    if (b0.is_zero()) throw DomainError("jet power at a zero base");
    Jet u = b * Jet(Scalar(1) / b0);
    u.at(0, 0) = Scalar(0);
    Jet sum(Scalar(1));
    Jet term(Scalar(1));
    Scalar binom(1);
    for (int n = 1; n <= kOrder; ++n) {
      binom = binom * (r - (n - 1)) / n;
      term = term * u;
      sum = sum + Jet(binom) * term;
    }
    return Jet(scalar_power(b0, r)) * sum;
  }

  HomogeneousForm form(int degree) const {
    HomogeneousForm f;
    for (int k = 0; k <= degree; ++k) f.c.push_back(at(degree - k, k));
    return f;
  }

 private:
  static Scalar scalar_power(const Scalar& base, const Scalar& r) {
    if (base == Scalar(1)) return Scalar(1);
    if (base.is_exact() && r.is_integer()) {
      const mpz_class& e = r.as_rational().get_num();
      if (e.fits_sint_p()) return wallach::pow(base, static_cast<int>(e.get_si()));
    }
    return Scalar(std::pow(base.to_double(), r.to_double()));
  }

  std::array<std::array<Scalar, kOrder + 1>, kOrder + 1> c_{};
};

}  // namespace

const Scalar& HomogeneousForm::coeff(int i, int j) const {
  if (i + j != degree() || i < 0 || j < 0) throw std::out_of_range("monomial degree mismatch");
  return c.at(static_cast<std::size_t>(j));
}

Scalar HomogeneousForm::operator()(const Scalar& x, const Scalar& y) const {
  Scalar sum(0);
  const int d = degree();
  for (int k = 0; k <= d; ++k) sum += c[static_cast<std::size_t>(k)] * pow(x, d - k) * pow(y, k);
  return sum;
}

Polynomial HomogeneousForm::at_x_one() const { return Polynomial(c); }

ShiftedExpansion shifted_expansion(const Parameters& p, const Scalar& x1, const Scalar& x2) {
  if (!p.reduced_ok()) throw DomainError("a1a2a3 = 0: the reduced flow is undefined for " + p.str());
  if (!(x1.sign() > 0) || !(x2.sign() > 0)) throw DomainError("expansion point must be positive");
  const Jet jx = Jet::variable(x1, 0);
  const Jet jy = Jet::variable(x2, 1);
  const Jet jz = pow(jx, -(p.a(2) / p.a(0))) * pow(jy, -(p.a(2) / p.a(1)));
  const std::array<Jet, 3> a{Jet(p.a(0)), Jet(p.a(1)), Jet(p.a(2))};
  const auto f = formula::field3<Jet>(a, {jx, jy, jz});
  ShiftedExpansion e;
  e.value = {f[0].at(0, 0), f[1].at(0, 0)};
  e.linear = {{{f[0].at(1, 0), f[0].at(0, 1)}, {f[1].at(1, 0), f[1].at(0, 1)}}};
  e.P2 = f[0].form(2);
  e.Q2 = f[1].form(2);
  e.P3 = f[0].form(3);
  e.Q3 = f[1].form(3);
  return e;
}

ShiftedExpansion shifted_quadratic_parts() {
  const Scalar q = Scalar::ratio(1, 4);
  return shifted_expansion(Parameters(q, q, q), Scalar(1), Scalar(1));
}

Polynomial delta_polynomial(const ShiftedExpansion& e) {
  return e.Q2.at_x_one() - Polynomial({Scalar(0), Scalar(1)}) * e.P2.at_x_one();
}

std::vector<Scalar> delta_u_roots() {
  std::vector<Scalar> out;
  for (const auto& r : real_roots(delta_polynomial(shifted_quadratic_parts()))) out.push_back(r.value);
  return out;
}

BlowupReport blowup_linearizations() {
  BlowupReport report;
  report.expansion = shifted_quadratic_parts();
  report.delta = delta_polynomial(report.expansion);
  const Polynomial p2 = report.expansion.P2.at_x_one();
  const Polynomial u_poly({Scalar(0), Scalar(1)});
  const Polynomial off = report.expansion.Q3.at_x_one() - u_poly * report.expansion.P3.at_x_one();
  const Polynomial d_delta = report.delta.derivative();
  report.consistent = true;
  for (const auto& root : real_roots(report.delta)) {
    BlowupPoint pt;
    pt.u = root.value;
    pt.beta = p2(pt.u);
    if (pt.beta.is_zero()) throw std::logic_error("blow-up point u = " + pt.u.str() + " has beta = 0");
    pt.off_diagonal = off(pt.u);
    pt.off_diagonal_closed_form = (pt.u - 1) * (pt.u + 1) * (2 * pt.u * pt.u - pt.u + 2) / 2;
    pt.eigenvalues = {pt.beta, d_delta(pt.u)};
    const int s0 = pt.eigenvalues[0].sign();
    const int s1 = pt.eigenvalues[1].sign();
    if (s0 * s1 < 0) {
      pt.kind = PointKind::Saddle;
    } else if (s0 > 0 && s1 > 0) {
      pt.kind = PointKind::UnstableNode;
    } else if (s0 < 0 && s1 < 0) {
      pt.kind = PointKind::StableNode;
    }
    const auto close = [](const Scalar& l, const Scalar& r) {
      return std::abs((l - r).to_double()) <= 1e-8 * std::max(1.0, std::abs(r.to_double()));
    };
    report.consistent = report.consistent && close(pt.eigenvalues[1], -3 * pt.beta) &&
                        close(pt.off_diagonal, pt.off_diagonal_closed_form);
    report.points.push_back(pt);
  }
  const bool three_saddles = report.points.size() == 3 &&
                             std::all_of(report.points.begin(), report.points.end(),
                                         [](const BlowupPoint& b) { return b.kind == PointKind::Saddle; });
  report.verdict = three_saddles ? "saddle with six hyperbolic sectors"
                                 : "blow-up points are not three saddles; no sector verdict";
  return report;
}

void to_json(nlohmann::json& j, const HomogeneousForm& f) {
  j = nlohmann::json::array();
  for (const auto& v : f.c) j.push_back(v);
}

void to_json(nlohmann::json& j, const BlowupReport& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.points) {
    points.push_back({{"u", p.u},
                      {"beta", p.beta},
                      {"eigenvalues", nlohmann::json::array({p.eigenvalues[0], p.eigenvalues[1]})},
                      {"off_diagonal", p.off_diagonal},
                      {"off_diagonal_closed_form", p.off_diagonal_closed_form},
                      {"kind", to_string(p.kind)}});
  }
  nlohmann::json delta = nlohmann::json::array();
  for (const auto& c : r.delta.coefficients()) delta.push_back(c);
  const auto& e = r.expansion;
  j = {{"params", nlohmann::json::array({"1/4", "1/4", "1/4"})},
       {"point", {1, 1}},
       {"linear_part", nlohmann::json::array({nlohmann::json::array({e.linear[0][0], e.linear[0][1]}),
                                              nlohmann::json::array({e.linear[1][0], e.linear[1][1]})})},
       {"P2", e.P2},
       {"Q2", e.Q2},
       {"P3", e.P3},
       {"Q3", e.Q3},
       {"forms_basis", "coefficients of x^d, x^(d-1) y, ..., y^d"},
       {"delta_ascending", delta},
       {"points", points},
       {"consistent", r.consistent},
       {"verdict", r.verdict}};
}

}  // namespace wallach
