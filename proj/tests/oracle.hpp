#pragma once

// Independent reference evaluators for the tests. Written from the field
// definitions directly in long double and plain GMP, sharing no code with
// the library.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace oracle {

using LD = long double;
using A3 = std::array<LD, 3>;

inline LD b_term(const A3& a, const A3& x) {
  const LD num = 1 / (a[0] * x[0]) + 1 / (a[1] * x[1]) + 1 / (a[2] * x[2]) -
                 (x[0] / (x[1] * x[2]) + x[1] / (x[0] * x[2]) + x[2] / (x[0] * x[1]));
  return num / (1 / a[0] + 1 / a[1] + 1 / a[2]);
}

inline A3 field3(const A3& a, const A3& x) {
  const LD b = b_term(a, x);
  const LD f = -1 - a[0] * x[0] * (x[0] / (x[1] * x[2]) - x[1] / (x[0] * x[2]) - x[2] / (x[0] * x[1])) + x[0] * b;
  const LD g = -1 - a[1] * x[1] * (x[1] / (x[0] * x[2]) - x[0] / (x[1] * x[2]) - x[2] / (x[0] * x[1])) + x[1] * b;
  const LD h = -1 - a[2] * x[2] * (x[2] / (x[0] * x[1]) - x[1] / (x[0] * x[2]) - x[0] / (x[1] * x[2])) + x[2] * b;
  return {f, g, h};
}

inline LD phi(const A3& a, LD x1, LD x2) {
  return std::pow(x1, -a[2] / a[0]) * std::pow(x2, -a[2] / a[1]);
}

inline std::array<LD, 2> field2(const A3& a, LD x1, LD x2) {
  const auto v = field3(a, {x1, x2, phi(a, x1, x2)});
  return {v[0], v[1]};
}

inline LD log_volume(const A3& a, const A3& x) {
  return std::log(x[0]) / a[0] + std::log(x[1]) / a[1] + std::log(x[2]) / a[2];
}

/// Richardson-extrapolated central differences of field2.
inline std::array<std::array<LD, 2>, 2> jacobian2(const A3& a, LD x1, LD x2) {
  std::array<std::array<LD, 2>, 2> j{};
  const std::array<LD, 2> x{x1, x2};
  for (int c = 0; c < 2; ++c) {
    const LD h = 1e-4L * std::max<LD>(1, std::abs(x[c]));
    auto diff = [&](LD step) {
      auto xp = x;
      auto xm = x;
      xp[c] += step;
      xm[c] -= step;
      const auto fp = field2(a, xp[0], xp[1]);
      const auto fm = field2(a, xm[0], xm[1]);
      return std::array<LD, 2>{(fp[0] - fm[0]) / (2 * step), (fp[1] - fm[1]) / (2 * step)};
    };
    const auto d1 = diff(h);
    const auto d2 = diff(h / 2);
    for (int r = 0; r < 2; ++r) j[r][c] = (4 * d2[r] - d1[r]) / 3;
  }
  return j;
}

/// Left-hand sides of the homogeneous equilibrium equations in exact arithmetic.
inline std::array<mpq_class, 2> residual(const std::array<mpq_class, 3>& a, const std::array<mpq_class, 3>& x) {
  const mpq_class& a1 = a[0];
  const mpq_class& a2 = a[1];
  const mpq_class& a3 = a[2];
  const mpq_class& x1 = x[0];
  const mpq_class& x2 = x[1];
  const mpq_class& x3 = x[2];
  mpq_class e1 = (a2 + a3) * (a1 * x2 * x2 + a1 * x3 * x3 - x2 * x3) + (a2 * x2 + a3 * x3) * x1 -
                 (a1 * a2 + a1 * a3 + 2 * a2 * a3) * x1 * x1;
  mpq_class e2 = (a1 + a3) * (a2 * x1 * x1 + a2 * x3 * x3 - x1 * x3) + (a1 * x1 + a3 * x3) * x2 -
                 (a1 * a2 + 2 * a1 * a3 + a2 * a3) * x2 * x2;
  return {e1, e2};
}

/// Seeded uniform draws.
class Draw {
 public:
  explicit Draw(unsigned long long seed) : rng_(seed) {}
  double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
