#pragma once

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json_fwd.hpp>

namespace wallach {

/// Thrown when an operation is outside the mathematical domain of the model
/// (s2 = 0, nonpositive metric, division by an exact zero, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A dimensionless number that is either an exact rational or a double.
///
/// Exact values are kept in lowest terms with a positive denominator (GMP
/// canonical form). Arithmetic between two exact values stays exact; as soon
/// as a double takes part the result is a double.
class Scalar {
 public:
  Scalar() : value_(mpq_class(0)) {}
  Scalar(int v) : value_(mpq_class(v)) {}      // NOLINT(google-explicit-constructor)
  Scalar(long v) : value_(mpq_class(v)) {}     // NOLINT(google-explicit-constructor)
  Scalar(double v) : value_(v) {}              // NOLINT(google-explicit-constructor)
  explicit Scalar(mpq_class q);

  static Scalar ratio(long num, long den);
  static Scalar ratio(const mpz_class& num, const mpz_class& den);

  /// Accepts "n/d", integers (both exact) and decimal literals (float).
  static Scalar parse(std::string_view text);

  bool is_exact() const { return std::holds_alternative<mpq_class>(value_); }
  const mpq_class& as_rational() const;
  double to_double() const;
  int sign() const;
  bool is_zero() const { return sign() == 0; }
  /// True for an exact rational with denominator 1.
  bool is_integer() const;

  /// "n/d" (or "n") when exact, 17 significant digits otherwise.
  std::string str() const;

  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }
  friend Scalar operator-(const Scalar& v);

  friend bool operator==(const Scalar& lhs, const Scalar& rhs);
  friend std::partial_ordering operator<=>(const Scalar& lhs, const Scalar& rhs);

 private:
  std::variant<mpq_class, double> value_;
};

Scalar abs(const Scalar& v);
/// Exact when the argument is an exact square of a rational, float otherwise.
Scalar sqrt(const Scalar& v);
Scalar pow(const Scalar& base, int exponent);
/// Same value, forced onto the float path.
Scalar to_float(const Scalar& v);

inline double to_double(double v) { return v; }
inline double to_double(const Scalar& v) { return v.to_double(); }

void to_json(nlohmann::json& j, const Scalar& v);

}  // namespace wallach
