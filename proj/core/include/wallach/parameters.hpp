#pragma once

#include <array>
#include <string>
#include <string_view>

#include "wallach/scalar.hpp"

namespace wallach {

/// Elementary symmetric polynomials (s1, s2, s3) of a triple.
template <class T>
std::array<T, 3> elementary_symmetric(const std::array<T, 3>& a) {
  return {a[0] + a[1] + a[2], a[0] * a[1] + a[0] * a[2] + a[1] * a[2], a[0] * a[1] * a[2]};
}

/// The parameter triple (a1, a2, a3) of a generalized Wallach space.
///
/// Immutable. Construction fails when s2 = a1a2 + a1a3 + a2a3 vanishes, since
/// the three-dimensional flow is undefined there.
class Parameters {
 public:
  Parameters(Scalar a1, Scalar a2, Scalar a3);

  /// Parses "a1,a2,a3" where each entry is "n/d", an integer or a decimal.
  static Parameters parse(std::string_view text);

  const std::array<Scalar, 3>& a() const { return a_; }
  const Scalar& a(int i) const { return a_.at(static_cast<std::size_t>(i)); }
  const Scalar& s1() const { return s_[0]; }
  const Scalar& s2() const { return s_[1]; }
  const Scalar& s3() const { return s_[2]; }
  /// A = a1a2 + a1a3 + a2a3, identical to s2.
  const Scalar& A() const { return s_[1]; }

  /// a1a2a3 != 0, needed by the volume-reduced planar system.
  bool reduced_ok() const { return reduced_ok_; }
  /// Every a_i lies in (0, 1/2].
  bool wallach_range() const { return wallach_range_; }
  /// Every a_i lies in the open interval (0, 1/2).
  bool interior() const { return interior_; }
  bool exact() const;

  std::array<double, 3> to_doubles() const;
  Parameters to_float() const;
  /// Returns the triple (a[perm[0]], a[perm[1]], a[perm[2]]).
  Parameters permuted(const std::array<int, 3>& perm) const;

  std::string str() const;

 private:
  std::array<Scalar, 3> a_;
  std::array<Scalar, 3> s_;
  bool reduced_ok_ = false;
  bool wallach_range_ = false;
  bool interior_ = false;
};

struct SymmetricFunctions {
  Scalar s1;
  Scalar s2;
  Scalar s3;
};

SymmetricFunctions symmetric_functions(const Parameters& p);

/// Lie-theoretic data: module dimensions d_i and the structure constant A = [123].
struct LieData {
  long d1 = 0;
  long d2 = 0;
  long d3 = 0;
  Scalar A;
};

/// a_i = A / d_i. Rejects nonpositive dimensions, A <= 0 and d_i < 2A.
Parameters params_from_dims(const LieData& lie);

struct DomainReport {
  bool s2_nonzero = false;
  bool reduced_ok = false;
  bool wallach_range = false;
  bool interior = false;
  std::string note;
};

DomainReport validate(const Parameters& p);
/// Same report for a raw triple, which may have s2 = 0.
DomainReport validate(const std::array<Scalar, 3>& a);

void to_json(nlohmann::json& j, const Parameters& p);
void to_json(nlohmann::json& j, const DomainReport& r);

}  // namespace wallach
