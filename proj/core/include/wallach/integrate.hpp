#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wallach/flow.hpp"
#include "wallach/parameters.hpp"

namespace wallach {

enum class TrajectoryStatus { ConvergedTo, LeftDomain, MaxTimeReached, StepUnderflow };

struct TrajectorySample {
  double t;
  double x1;
  double x2;
  double x3;
  double V;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  TrajectoryStatus status = TrajectoryStatus::MaxTimeReached;
  /// Index into the equilibrium list when status is ConvergedTo.
  int equilibrium = -1;
  /// max |V(t) / V(0) - 1| over the accepted steps.
  double max_volume_drift = 0.0;
  int accepted_steps = 0;
  int rejected_steps = 0;
  std::string detail;
};

struct IntegrateOptions {
  double t_max = 100.0;
  double rel_tol = 1e-10;
  /// Step in y = log x (default) or directly in x.
  bool log_coordinates = true;
  double initial_step = 1e-3;
  long max_steps = 5'000'000;
  /// V = 1 equilibria used for the convergence test; computed from the
  /// census when empty.
  std::vector<std::array<double, 3>> equilibria;
};

/// Dormand-Prince 5(4) on the reduced field (x1, x2) with x3 = phi(x1, x2).
Trajectory integrate_flow(const Parameters& p, const std::array<double, 2>& x0, const IntegrateOptions& options = {});
/// The same integrator on the unreduced field; V is a first integral.
Trajectory integrate_flow_3d(const Parameters& p, const std::array<double, 3>& x0,
                             const IntegrateOptions& options = {});

/// V = 1 equilibria of the census, in the order of the census rays.
std::vector<std::array<double, 3>> unit_volume_equilibria(const Parameters& p);

struct LimitReport {
  TrajectoryStatus status = TrajectoryStatus::MaxTimeReached;
  int equilibrium = -1;
  double distance = 0.0;
  /// For LeftDomain: which coordinate left [1e-8, 1e8] and on which side.
  std::string exit_face;
};

/// Nearest equilibrium to the final state within 1e-5 (relative), else the
/// trajectory's own status. Equilibria are rescaled to the final volume.
LimitReport classify_limit(const Parameters& p, const Trajectory& traj,
                           const std::vector<std::array<double, 3>>& equilibria);

const char* to_string(TrajectoryStatus status);

/// t,x1,x2,x3,V with 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& traj);
void to_json(nlohmann::json& j, const Trajectory& traj);

}  // namespace wallach
