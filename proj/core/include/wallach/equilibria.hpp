#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wallach/flow.hpp"
#include "wallach/parameters.hpp"
#include "wallach/polynomial.hpp"

namespace wallach {

enum class FamilyTag {
  TwoEqualDiagonal,     // x1 = x2 when a1 = a2
  TwoEqualOffDiagonal,  // x3 = 2b(x1 + x2) when a1 = a2
  SumHalf,              // a1 + a2 + a3 = 1/2, family index 1..4
  GeneralQuartic,       // roots of the quartic in s for rays (1, t, s)
  Numeric,              // found only by the multi-start Newton census
};

/// Parametrization of `EquilibriumRay::native`.
enum class Convention {
  X3One,     // (x1, x2, 1)
  OneTS,     // (1, t, s)
  FamilyQ1,  // closed-form family evaluated at q = 1
};

/// A ray of equilibria of the homogeneous system, i.e. one Einstein metric up
/// to homothety.
struct EquilibriumRay {
  /// Representative with x3 = 1.
  MetricPoint rep;
  /// The same ray in the parametrization of the family that produced it.
  MetricPoint native;
  Convention native_convention = Convention::X3One;
  FamilyTag family = FamilyTag::Numeric;
  int family_index = 0;
  int multiplicity = 1;
  bool ill_conditioned = false;
};

/// Discriminants of the closed-form case analysis. D1 and T belong to the
/// two-equal case (a1 = a2 = b, a3 = c); D3 to the general quartic.
struct CaseDiscriminants {
  std::optional<Scalar> D1;
  std::optional<Scalar> T;
  std::optional<Scalar> D3;
};

/// Left-hand sides of the two homogeneous quadratic equilibrium equations.
namespace formula {

template <class T>
std::array<T, 2> equilibrium_residual(const std::array<T, 3>& a, const std::array<T, 3>& x) {
  const T e1 = (a[1] + a[2]) * (a[0] * x[1] * x[1] + a[0] * x[2] * x[2] - x[1] * x[2]) +
               (a[1] * x[1] + a[2] * x[2]) * x[0] -
               (a[0] * a[1] + a[0] * a[2] + T(2) * a[1] * a[2]) * x[0] * x[0];
  const T e2 = (a[0] + a[2]) * (a[1] * x[0] * x[0] + a[1] * x[2] * x[2] - x[0] * x[2]) +
               (a[0] * x[0] + a[2] * x[2]) * x[1] -
               (a[0] * a[1] + T(2) * a[0] * a[2] + a[1] * a[2]) * x[1] * x[1];
  return {e1, e2};
}

}  // namespace formula

std::array<Scalar, 2> residual(const Parameters& p, const MetricPoint& x);
/// max |E_i| / max(x_i)^2, a scale-free size of the residual.
double residual_norm(const Parameters& p, const MetricPoint& x);

struct TwoEqualResult {
  std::vector<EquilibriumRay> rays;
  CaseDiscriminants discriminants;
};

/// All rays for a = (b, b, c) with b, c in (0, 1/2].
TwoEqualResult solve_two_equal(const Scalar& b, const Scalar& c);

/// The four families for pairwise distinct a_i in (0, 1/2) with a1 + a2 + a3 = 1/2.
std::vector<EquilibriumRay> solve_sum_half(const Parameters& p);

/// Coefficients {c4, c3, c2, c1, c0} of the quartic in s for rays (1, t, s).
std::array<Scalar, 5> quartic_coefficients(const Parameters& p);
Polynomial quartic_polynomial(const Parameters& p);
Scalar quartic_discriminant(const Parameters& p);

struct GeneralResult {
  std::vector<EquilibriumRay> rays;
  std::vector<std::string> diagnostics;
};

/// Rays from the positive real roots of the quartic (general position).
GeneralResult solve_general(const Parameters& p);

struct SolveOptions {
  int grid = 20;
  double grid_lo = 1.0 / 20.0;
  double grid_hi = 20.0;
  int max_iterations = 80;
  /// Relative distance under which two simple rays are the same ray.
  double dedup_tol = 1e-8;
  /// Looser match for rays of multiplicity > 1, which Newton only reaches
  /// to about sqrt(machine epsilon).
  double multiple_root_tol = 1e-5;
  bool numeric_census = true;
};

/// Deterministic damped-Newton multi-start on the equilibrium equations with
/// x3 = 1. Returns distinct (x1, x2) sorted lexicographically.
std::vector<std::array<double, 2>> newton_census(const Parameters& p, const SolveOptions& options = {});

enum class SolverCase { TwoEqual, SumHalf, General, NumericOnly };

struct Census {
  std::vector<EquilibriumRay> rays;
  SolverCase solver_case = SolverCase::NumericOnly;
  CaseDiscriminants discriminants;
  std::vector<std::string> diagnostics;

  int distinct() const { return static_cast<int>(rays.size()); }
};

/// Dispatches to the applicable closed form, cross-checks against the Newton
/// census, polishes float rays and returns rays sorted by (x1, x2).
Census solve_all(const Parameters& p, const SolveOptions& options = {});

/// Scales a ray so that V = 1.
MetricPoint normalize_unit_volume(const Parameters& p, const MetricPoint& x);
MetricPoint normalize_unit_volume(const Parameters& p, const EquilibriumRay& ray);

const char* to_string(FamilyTag tag);
const char* to_string(Convention convention);
const char* to_string(SolverCase solver_case);

}  // namespace wallach
