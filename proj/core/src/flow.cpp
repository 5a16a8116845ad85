#include "wallach/flow.hpp"

#include <cmath>

namespace wallach {

namespace {

void require_reduced(const Parameters& p) {
  if (!p.reduced_ok()) throw DomainError("a1a2a3 = 0: the reduced flow is undefined for " + p.str());
}

/// base^exponent, exact when the exponent is an exact integer and the base exact.
Scalar power(const Scalar& base, const Scalar& exponent) {
  if (base.is_exact() && exponent.is_integer()) {
    const mpz_class& e = exponent.as_rational().get_num();
    if (e.fits_sint_p()) return pow(base, static_cast<int>(e.get_si()));
  }
  return Scalar(std::pow(base.to_double(), exponent.to_double()));
}

}  // namespace

MetricPoint::MetricPoint(Scalar x1, Scalar x2, Scalar x3) : x_{std::move(x1), std::move(x2), std::move(x3)} {
  for (const auto& v : x_) {
    if (!(v.sign() > 0)) throw DomainError("metric coefficients must be positive, got " + str());
  }
}

MetricPoint::MetricPoint(const std::array<double, 3>& x) : MetricPoint(Scalar(x[0]), Scalar(x[1]), Scalar(x[2])) {}

bool MetricPoint::exact() const { return x_[0].is_exact() && x_[1].is_exact() && x_[2].is_exact(); }

std::array<double, 3> MetricPoint::to_doubles() const {
  return {x_[0].to_double(), x_[1].to_double(), x_[2].to_double()};
}

MetricPoint MetricPoint::scaled(const Scalar& factor) const {
  return MetricPoint(x_[0] * factor, x_[1] * factor, x_[2] * factor);
}

std::string MetricPoint::str() const {
  return "(" + x_[0].str() + ", " + x_[1].str() + ", " + x_[2].str() + ")";
}

Scalar b_term(const Parameters& p, const MetricPoint& x) {
  require_reduced(p);
  return formula::b_term(p.a(), x.x());
}

Velocity3 vector_field_3d(const Parameters& p, const MetricPoint& x) {
  require_reduced(p);
  const auto v = formula::field3(p.a(), x.x());
  return {v[0], v[1], v[2]};
}

Scalar volume(const Parameters& p, const MetricPoint& x) {
  require_reduced(p);
  const bool integral = (Scalar(1) / p.a(0)).is_integer() && (Scalar(1) / p.a(1)).is_integer() &&
                        (Scalar(1) / p.a(2)).is_integer();
  if (integral && x.exact()) {
    Scalar v(1);
    for (int i = 0; i < 3; ++i) v *= power(x[i], Scalar(1) / p.a(i));
    return v;
  }
  return Scalar(std::exp(log_volume(p, x)));
}

double log_volume(const Parameters& p, const MetricPoint& x) {
  require_reduced(p);
  return formula::log_volume(p.to_doubles(), x.to_doubles());
}

Scalar phi(const Parameters& p, const Scalar& x1, const Scalar& x2) {
  require_reduced(p);
  if (!(x1.sign() > 0) || !(x2.sign() > 0)) throw DomainError("phi needs positive x1, x2");
  return power(x1, -(p.a(2) / p.a(0))) * power(x2, -(p.a(2) / p.a(1)));
}

MetricPoint lift_to_unit_volume(const Parameters& p, const Scalar& x1, const Scalar& x2) {
  return MetricPoint(x1, x2, phi(p, x1, x2));
}

std::array<Scalar, 2> vector_field_2d(const Parameters& p, const Scalar& x1, const Scalar& x2) {
  const auto v = vector_field_3d(p, lift_to_unit_volume(p, x1, x2));
  return {v.v1, v.v2};
}

}  // namespace wallach
