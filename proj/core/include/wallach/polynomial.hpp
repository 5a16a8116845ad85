#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "wallach/scalar.hpp"

namespace wallach {

/// Dense univariate polynomial with `Scalar` coefficients, stored in ascending
/// order (coefficient k multiplies t^k). Leading zeros are trimmed.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> ascending);
  static Polynomial from_descending(std::vector<Scalar> descending);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Scalar>& coefficients() const { return c_; }
  const Scalar& coeff(int k) const { return c_.at(static_cast<std::size_t>(k)); }
  const Scalar& leading() const { return c_.back(); }
  bool exact() const;

  Scalar operator()(const Scalar& t) const;
  long double eval(long double t) const;
  Polynomial derivative() const;
  Polynomial monic() const;

  friend Polynomial operator+(const Polynomial& lhs, const Polynomial& rhs);
  friend Polynomial operator-(const Polynomial& lhs, const Polynomial& rhs);
  friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
  friend bool operator==(const Polynomial& lhs, const Polynomial& rhs) { return lhs.c_ == rhs.c_; }

 private:
  std::vector<Scalar> c_;
};

struct DivMod {
  Polynomial quotient;
  Polynomial remainder;
};

DivMod divmod(const Polynomial& num, const Polynomial& den);
/// Monic gcd; meaningful for exact coefficients only.
Polynomial gcd(Polynomial a, Polynomial b);
/// Yun's algorithm: returns (factor, multiplicity) pairs with squarefree,
/// pairwise coprime monic factors. Exact coefficients only.
std::vector<std::pair<Polynomial, int>> square_free_decomposition(const Polynomial& p);
/// Number of distinct real roots by Sturm's theorem. Exact coefficients only.
int count_real_roots(const Polynomial& p);

Scalar resultant(const Polynomial& a, const Polynomial& b);
/// (-1)^(n(n-1)/2) Res(p, p') / lc(p).
Scalar discriminant(const Polynomial& p);

std::vector<std::complex<double>> companion_roots(const Polynomial& p);
/// Exact rational root of `p` near `approx`, found among the continued
/// fraction convergents of `approx` and verified by exact evaluation.
std::optional<Scalar> recover_rational_root(const Polynomial& p, double approx);

struct RealRoot {
  Scalar value;
  int multiplicity = 1;
  /// Set for float-path clusters (numerically multiple roots).
  bool ill_conditioned = false;
};

/// Real roots in ascending order, with multiplicities.
///
/// Exact input: square-free split, exact root counts from Sturm sequences,
/// rational roots recovered exactly, the rest as polished doubles.
/// Float input: companion eigenvalues, with roots closer than
/// `cluster_tol` (relative) reported once with multiplicity.
std::vector<RealRoot> real_roots(const Polynomial& p, double cluster_tol = 1e-6);

}  // namespace wallach
