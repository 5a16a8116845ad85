#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "wallach/parameters.hpp"
#include "wallach/scalar.hpp"

namespace wallach {

namespace formula {

/// The degree-12 degeneracy polynomial in the elementary symmetric functions.
template <class T>
T q_poly(const T& s1, const T& s2, const T& s3) {
  const T s1_2 = s1 * s1;
  const T s1_3 = s1_2 * s1;
  const T s1_4 = s1_3 * s1;
  const T s1_5 = s1_4 * s1;
  const T s2_2 = s2 * s2;
  const T s2_3 = s2_2 * s2;
  const T s2_4 = s2_3 * s2;
  const T s3_2 = s3 * s3;
  const T s3_3 = s3_2 * s3;
  const T lead = T(2) * s1 + T(4) * s3 - T(1);
  const T inner = T(64) * s1_5 - T(64) * s1_4 + T(8) * s1_3 + T(12) * s1_2 - T(6) * s1 + T(1) +
                  T(240) * s3 * s1_2 - T(240) * s3 * s1 - T(1536) * s3_2 * s1 - T(4096) * s3_3 + T(60) * s3 +
                  T(768) * s3_2;
  const T k = T(2) * s1 - T(32) * s3 - T(1);
  return lead * inner - T(8) * s1 * lead * k * (T(10) * s1 + T(32) * s3 - T(5)) * s2 -
         T(16) * s1_2 *
             (T(13) - T(52) * s1 + T(640) * s3 * s1 + T(1024) * s3_2 - T(320) * s3 + T(52) * s1_2) * s2_2 +
         T(64) * (T(2) * s1 - T(1)) * k * s2_3 + T(2048) * s1 * (T(2) * s1 - T(1)) * s2_4;
}

template <class T>
T q_of(const std::array<T, 3>& a) {
  const auto s = elementary_symmetric(a);
  return q_poly(s[0], s[1], s[2]);
}

/// 4(a1+a2)(a1+a3)(a2+a3) - 2(a1+a2+a3) + 1.
template <class T>
T q1_of(const std::array<T, 3>& a) {
  return T(4) * (a[0] + a[1]) * (a[0] + a[2]) * (a[1] + a[2]) - T(2) * (a[0] + a[1] + a[2]) + T(1);
}

}  // namespace formula

Scalar q_eval(const std::array<Scalar, 3>& a);
Scalar q_eval(const Parameters& p);
double q_eval(const std::array<double, 3>& a);
std::array<Scalar, 3> grad_q(const std::array<Scalar, 3>& a);
std::array<Scalar, 3> grad_q(const Parameters& p);

Scalar q1_eval(const std::array<Scalar, 3>& a);
Scalar q1_eval(const Parameters& p);
std::array<Scalar, 3> grad_q1(const std::array<Scalar, 3>& a);

struct EdgeCurvePoint {
  Scalar t;
  std::array<Scalar, 3> a;
};

/// a_i = -(16t^3 - 4t + 1) / (2(8t^2 - 1)), the other two equal to t; i in 1..3.
/// A singular curve of Q = 0.
EdgeCurvePoint edge_curve(const Scalar& t, int i);

/// The a1 = 1/2 section of Q = 0 in the variables a2 + a3 and a2 a3.
Scalar omega_slice_a1_half(const Scalar& a2, const Scalar& a3);

enum class Region { O1, O2, O3, OnOmega, Outside };

/// |Q| <= 1e-10 (1 + |a|)^12, exact zero for exact input.
bool on_omega(const std::array<Scalar, 3>& a, const Scalar& q);

/// OnOmega when Q vanishes; otherwise, for a in (0, 1/2)^3, the component
/// read off the equilibrium census (O1: unstable node + 3 saddles,
/// O2: stable node + 3 saddles, O3: 2 saddles); Outside for anything else.
Region component_classify(const Parameters& p);

struct SurfaceSample {
  std::array<Scalar, 3> a;
  Scalar Q;
  Scalar Q1;
  std::array<Scalar, 3> gradQ;
  Region region = Region::Outside;
};

SurfaceSample sample_at(const std::array<Scalar, 3>& a);

enum class GridSpacing {
  Inclusive,     // lo + (hi - lo) i / (n - 1)
  CellCentered,  // lo + (hi - lo)(i + 1/2) / n
};

struct ScanOptions {
  GridSpacing spacing = GridSpacing::Inclusive;
  unsigned threads = 0;  // 0: hardware concurrency
  bool exact = false;
};

/// n^3 samples in lexicographic (a1, a2, a3) order.
std::vector<SurfaceSample> scan_grid(const Scalar& lo, const Scalar& hi, int n, const ScanOptions& options = {});

const char* to_string(Region region);

void to_json(nlohmann::json& j, const SurfaceSample& s);
/// Header a1,a2,a3,Q,Q1,gQ1,gQ2,gQ3,region.
void write_csv(std::ostream& out, const std::vector<SurfaceSample>& samples);

}  // namespace wallach
