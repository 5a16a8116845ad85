#pragma once

#include <array>
#include <complex>
#include <vector>

#include "wallach/equilibria.hpp"
#include "wallach/flow.hpp"
#include "wallach/parameters.hpp"

namespace wallach {

/// One monomial c * x1^e1 x2^e2 x3^e3.
struct F2Term {
  int e1;
  int e2;
  int e3;
  Scalar c;
};

/// The quartic form F2 whose sign decides degeneracy, as 15 explicit monomials.
struct F2Form {
  std::array<F2Term, 15> terms;

  Scalar& coeff(int e1, int e2, int e3);
  const Scalar& coeff(int e1, int e2, int e3) const;
};

F2Form f2_form(const Parameters& p);
Scalar evaluate(const F2Form& form, const MetricPoint& x);

/// Quadratic form with rho = 2 F1 / (A x1 x2 x3) on the equilibrium set.
Scalar f1(const Parameters& p, const MetricPoint& x);
/// Quartic form with delta = F2 / (A^2 x1^2 x2^2 x3^2) on the equilibrium set.
Scalar f2(const Parameters& p, const MetricPoint& x);

struct Linearization {
  Scalar rho;
  Scalar delta;
  Scalar sigma;
  /// Eigenvalues of the 2D Jacobian, |lambda1| <= |lambda2|.
  std::complex<double> lambda1;
  std::complex<double> lambda2;
  /// |delta| * (x1 x2 x3)^(2/3): invariant under rescaling the representative.
  double degeneracy = 0.0;
};

/// Throws DomainError unless x solves the equilibrium equations to 1e-9.
Linearization linearize_at(const Parameters& p, const MetricPoint& x);
Linearization linearize_at(const Parameters& p, const EquilibriumRay& ray);
/// Same, with a caller-supplied F2 (used to check that the acceptance suite
/// notices a corrupted coefficient).
Linearization linearize_at(const Parameters& p, const MetricPoint& x, const F2Form& form);

enum class PointKind { StableNode, UnstableNode, Saddle, StrongFocus, WeakFocusOrCenter, Degenerate };

struct Classification {
  PointKind kind = PointKind::Degenerate;
  /// Float mode only: degeneracy measure at or below `kNearDegenerate`.
  bool near_degenerate = false;
  /// Exactly one eigenvalue is (numerically) zero.
  bool semi_hyperbolic_candidate = false;
};

inline constexpr double kNearDegenerate = 1e-9;

Classification classify(const Linearization& lin);

/// 4 G(x1^2, x2^2, x3^2) / (x1 x2 x3)^2 where G is the nonnegative quadratic
/// form below. Equals sigma at every equilibrium; defined for any positive x.
Scalar sigma_expression(const Parameters& p, const MetricPoint& x);
/// Symmetric matrix of G; eigenvalues 0, 2A and a1^2 + a2^2 + a3^2 + A.
std::array<std::array<Scalar, 3>, 3> g_form_matrix(const Parameters& p);

enum class SigmaFamily { Equal, TwoEqual };

/// Parameters carrying an equilibrium with sigma = 0. Equal: (s, s, s) with
/// s in (0, 1/2]. TwoEqual: a_i = a_j = (2s^2-1)^2/(8s^2),
/// a_k = (4s^4+4s^2-1)/(8s^2) with s strictly between sqrt(2 sqrt2 - 2)/2 and
/// sqrt2/2; k in 1..3 is the distinguished index.
Parameters sigma_zero_family(SigmaFamily which, const Scalar& s, int k = 3);

struct SigmaZeroPoint {
  int k;  // 0 for the Equal family
  Parameters params;
  /// Equilibrium on V = 1.
  MetricPoint point;
};

/// Equal: the single point (1, 1, 1). TwoEqual: one point per choice of k,
/// (2s^2 q, 2s^2 q), (2s^2 q, (1-2s^2) q), ((1-2s^2) q, 2s^2 q) for k = 3, 2, 1,
/// each lifted to V = 1.
std::vector<SigmaZeroPoint> sigma_zero_points(SigmaFamily which, const Scalar& s);
/// The closed-form scale q of the TwoEqual points.
double sigma_zero_q(double s);

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Central differences of the reduced field, step 1e-6 * max(1, |x_i|).
Matrix2 jacobian_2d_fd(const Parameters& p, double x1, double x2);
Matrix3 jacobian_3d_fd(const Parameters& p, const std::array<double, 3>& x);
std::vector<std::complex<double>> eigenvalues(const Matrix3& m);

const char* to_string(PointKind kind);

}  // namespace wallach
