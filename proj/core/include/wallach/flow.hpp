#pragma once

#include <array>
#include <cmath>

#include "wallach/parameters.hpp"
#include "wallach/scalar.hpp"

namespace wallach {

/// Metric scaling coefficients (x1, x2, x3) of an invariant metric; all positive.
class MetricPoint {
 public:
  MetricPoint(Scalar x1, Scalar x2, Scalar x3);
  explicit MetricPoint(const std::array<double, 3>& x);

  const std::array<Scalar, 3>& x() const { return x_; }
  const Scalar& operator[](int i) const { return x_.at(static_cast<std::size_t>(i)); }
  bool exact() const;
  std::array<double, 3> to_doubles() const;
  MetricPoint scaled(const Scalar& factor) const;
  std::string str() const;

 private:
  std::array<Scalar, 3> x_;
};

struct Velocity3 {
  Scalar v1;
  Scalar v2;
  Scalar v3;
};

/// Closed-form expressions shared by the exact (`Scalar`) and float (`double`)
/// paths. `a` are the parameters, `x` the metric coefficients.
namespace formula {

template <class T>
T b_term(const std::array<T, 3>& a, const std::array<T, 3>& x) {
  const T inv_sum = T(1) / a[0] + T(1) / a[1] + T(1) / a[2];
  const T ratios = x[0] / (x[1] * x[2]) + x[1] / (x[0] * x[2]) + x[2] / (x[0] * x[1]);
  return (T(1) / (a[0] * x[0]) + T(1) / (a[1] * x[1]) + T(1) / (a[2] * x[2]) - ratios) / inv_sum;
}

/// (f, g, h) of the normalized Ricci flow in the a_i form.
template <class T>
std::array<T, 3> field3(const std::array<T, 3>& a, const std::array<T, 3>& x) {
  const T b = b_term(a, x);
  std::array<T, 3> out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    const T bracket = x[i] / (x[j] * x[k]) - x[j] / (x[i] * x[k]) - x[k] / (x[i] * x[j]);
    out[i] = T(-1) - a[i] * x[i] * bracket + x[i] * b;
  }
  return out;
}

inline double log_volume(const std::array<double, 3>& a, const std::array<double, 3>& x) {
  return std::log(x[0]) / a[0] + std::log(x[1]) / a[1] + std::log(x[2]) / a[2];
}

/// x3 on the V = 1 surface.
inline double phi(const std::array<double, 3>& a, double x1, double x2) {
  return std::exp(-a[2] * (std::log(x1) / a[0] + std::log(x2) / a[1]));
}

inline std::array<double, 2> field2(const std::array<double, 3>& a, double x1, double x2) {
  const auto v = field3<double>(a, {x1, x2, phi(a, x1, x2)});
  return {v[0], v[1]};
}

}  // namespace formula

Scalar b_term(const Parameters& p, const MetricPoint& x);
Velocity3 vector_field_3d(const Parameters& p, const MetricPoint& x);

/// V = x1^(1/a1) x2^(1/a2) x3^(1/a3); exact when every 1/a_i is an integer.
Scalar volume(const Parameters& p, const MetricPoint& x);
double log_volume(const Parameters& p, const MetricPoint& x);

/// The x3 > 0 with V(x1, x2, x3) = 1; exact when a3/a1 and a3/a2 are integers.
Scalar phi(const Parameters& p, const Scalar& x1, const Scalar& x2);
MetricPoint lift_to_unit_volume(const Parameters& p, const Scalar& x1, const Scalar& x2);

/// (f~, g~) = (f, g) at (x1, x2, phi(x1, x2)).
std::array<Scalar, 2> vector_field_2d(const Parameters& p, const Scalar& x1, const Scalar& x2);

}  // namespace wallach
