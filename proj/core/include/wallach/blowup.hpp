#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wallach/linearize.hpp"
#include "wallach/parameters.hpp"
#include "wallach/polynomial.hpp"

namespace wallach {

/// Binary form sum_k c_k x^(d-k) y^k of degree d = c.size() - 1.
struct HomogeneousForm {
  std::vector<Scalar> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  /// Coefficient of x^i y^j with i + j = degree().
  const Scalar& coeff(int i, int j) const;
  Scalar operator()(const Scalar& x, const Scalar& y) const;
  /// The polynomial u -> form(1, u).
  Polynomial at_x_one() const;
};

/// Taylor data of the reduced 2D field about a base point, in the shifted
/// variables x = x1 - x1_0, y = x2 - x2_0.
struct ShiftedExpansion {
  std::array<Scalar, 2> value;
  std::array<std::array<Scalar, 2>, 2> linear;
  HomogeneousForm P2;
  HomogeneousForm Q2;
  HomogeneousForm P3;
  HomogeneousForm Q3;
};

/// Exact in rational mode whenever the powers in x3 = phi(x1, x2) can be
/// expanded exactly at the base point (e.g. base (1, 1)).
ShiftedExpansion shifted_expansion(const Parameters& p, const Scalar& x1, const Scalar& x2);
/// The expansion at (1, 1) for a1 = a2 = a3 = 1/4.
ShiftedExpansion shifted_quadratic_parts();

/// Delta(u) = Q2(1, u) - u P2(1, u).
Polynomial delta_polynomial(const ShiftedExpansion& e);
/// Real roots of Delta for the (1/4, 1/4, 1/4) expansion, ascending.
std::vector<Scalar> delta_u_roots();

struct BlowupPoint {
  Scalar u;
  Scalar beta;
  /// Q3(1, u) - u P3(1, u): the lower-left entry of the blown-up Jacobian.
  Scalar off_diagonal;
  /// (u - 1)(u + 1)(2u^2 - u + 2) / 2.
  Scalar off_diagonal_closed_form;
  /// (beta, Delta'(u)).
  std::array<Scalar, 2> eigenvalues;
  PointKind kind = PointKind::Degenerate;
};

struct BlowupReport {
  ShiftedExpansion expansion;
  Polynomial delta;
  std::vector<BlowupPoint> points;
  /// Every second eigenvalue equals -3 beta and every off-diagonal entry
  /// matches its closed form.
  bool consistent = false;
  std::string verdict;
};

/// Blow-up y = u x of the degenerate point (1, 1) at a1 = a2 = a3 = 1/4.
/// Throws std::logic_error if some beta vanishes.
BlowupReport blowup_linearizations();

void to_json(nlohmann::json& j, const HomogeneousForm& f);
void to_json(nlohmann::json& j, const BlowupReport& r);

}  // namespace wallach
