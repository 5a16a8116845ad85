#include "wallach/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "wallach/equilibria.hpp"

namespace wallach {

namespace {

constexpr double kDomainLo = 1e-8;
constexpr double kDomainHi = 1e8;
constexpr double kMinStep = 1e-14;
constexpr double kFieldTol = 1e-10;
constexpr double kEquilibriumTol = 1e-6;

template <std::size_t N>
using Vec = std::array<double, N>;

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, double h, std::initializer_list<std::pair<double, const Vec<N>*>> terms) {
  Vec<N> out = y;
  for (const auto& [w, k] : terms) {
    for (std::size_t i = 0; i < N; ++i) out[i] += h * w * (*k)[i];
  }
  return out;
}

template <std::size_t N>
bool finite(const Vec<N>& v) {
  return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

double relative_distance(const std::array<double, 3>& x, const std::array<double, 3>& e) {
  double d = 0.0;
  for (std::size_t i = 0; i < 3; ++i) d = std::max(d, std::abs(x[i] - e[i]) / std::max(1.0, std::abs(e[i])));
  return d;
}

std::string exit_face(const std::array<double, 3>& x) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(x[i] >= kDomainLo)) return fmt::format("x{} < {:g}", i + 1, kDomainLo);
    if (!(x[i] <= kDomainHi)) return fmt::format("x{} > {:g}", i + 1, kDomainHi);
  }
  return {};
}

/// Equilibria moved onto the volume level log V = lv.
std::vector<std::array<double, 3>> on_level(const std::array<double, 3>& a,
                                            const std::vector<std::array<double, 3>>& eqs, double lv) {
  const double scale = std::exp(lv / (1.0 / a[0] + 1.0 / a[1] + 1.0 / a[2]));
  std::vector<std::array<double, 3>> out;
  for (const auto& e : eqs) out.push_back({e[0] * scale, e[1] * scale, e[2] * scale});
  return out;
}

/// Generic driver. `to_x` maps the integration state to (x1, x2, x3) and
/// `field` returns (dstate/dt, max |dx/dt|).
template <std::size_t N, class ToX, class Field>
Trajectory drive(const Parameters& p, Vec<N> y, const IntegrateOptions& options, ToX to_x, Field field,
                 const std::vector<std::array<double, 3>>& equilibria) {
  if (!(options.rel_tol >= 1e-12 && options.rel_tol <= 1e-3)) {
    throw DomainError(fmt::format("rel_tol must lie in [1e-12, 1e-3], got {:g}", options.rel_tol));
  }
  const auto a = p.to_doubles();
  const double rtol = options.rel_tol;
  const double atol = options.rel_tol;
  Trajectory traj;

  auto record = [&](double t, const Vec<N>& state, double lv0) {
    const auto x = to_x(state);
    const double lv = formula::log_volume(a, x);
    const double drift = std::abs(std::expm1(lv - lv0));
    traj.max_volume_drift = std::max(traj.max_volume_drift, drift);
    traj.samples.push_back({t, x[0], x[1], x[2], std::exp(lv)});
  };
  auto converged = [&](const Vec<N>& state, double fnorm, const std::vector<std::array<double, 3>>& targets) {
    if (!(fnorm <= kFieldTol)) return -1;
    const auto x = to_x(state);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      if (relative_distance(x, targets[k]) <= kEquilibriumTol) return static_cast<int>(k);
    }
    return -1;
  };

  const auto x0 = to_x(y);
  if (!exit_face(x0).empty()) throw DomainError("initial point outside [1e-8, 1e8]");
  const double lv0 = formula::log_volume(a, x0);
  const auto targets = on_level(a, equilibria, lv0);
  record(0.0, y, lv0);

  auto [k1, fnorm] = field(y);
  if (!finite(k1)) throw DomainError("vector field is not finite at the initial point");
  if (int e = converged(y, fnorm, targets); e >= 0) {
    traj.status = TrajectoryStatus::ConvergedTo;
    traj.equilibrium = e;
    traj.detail = "initial point is an equilibrium";
    return traj;
  }

  double t = 0.0;
  double h = std::min(options.initial_step, options.t_max);
  double err_prev = 1.0;
  for (long step = 0; step < options.max_steps; ++step) {
    if (t >= options.t_max) break;
    h = std::min(h, options.t_max - t);
    if (h < kMinStep) {
      traj.status = TrajectoryStatus::StepUnderflow;
      traj.detail = fmt::format("step {:g} below {:g} at t = {:.17g}", h, kMinStep, t);
      return traj;
    }
    const auto k2 = field(axpy<N>(y, h, {{a21, &k1}})).first;
    const auto k3 = field(axpy<N>(y, h, {{a31, &k1}, {a32, &k2}})).first;
    const auto k4 = field(axpy<N>(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}})).first;
    const auto k5 = field(axpy<N>(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}})).first;
    const auto k6 = field(axpy<N>(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}})).first;
    const Vec<N> y_new = axpy<N>(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const auto [k7, fnorm_new] = field(y_new);

    double err = std::numeric_limits<double>::infinity();
    if (finite(y_new) && finite(k7)) {
      double sum = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        sum += (e / sc) * (e / sc);
      }
      err = std::sqrt(sum / static_cast<double>(N));
    }

    if (!(err <= 1.0)) {
      ++traj.rejected_steps;
      const double f = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= f;
      continue;
    }
    ++traj.accepted_steps;
    t += h;
    y = y_new;
    k1 = k7;
    record(t, y, lv0);
    const auto x = to_x(y);
    if (auto face = exit_face(x); !face.empty()) {
      traj.status = TrajectoryStatus::LeftDomain;
      traj.detail = face;
      return traj;
    }
    if (int e = converged(y, fnorm_new, targets); e >= 0) {
      traj.status = TrajectoryStatus::ConvergedTo;
      traj.equilibrium = e;
      traj.detail = fmt::format("converged at t = {:.17g}", t);
      return traj;
    }
    const double safe_err = std::max(err, 1e-10);
    const double factor = 0.9 * std::pow(safe_err, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
    h *= std::clamp(factor, 0.2, 5.0);
    err_prev = safe_err;
  }
  traj.status = TrajectoryStatus::MaxTimeReached;
  traj.detail = fmt::format("stopped at t = {:.17g}", t);
  return traj;
}

}  // namespace

std::vector<std::array<double, 3>> unit_volume_equilibria(const Parameters& p) {
  std::vector<std::array<double, 3>> out;
  for (const auto& ray : solve_all(p).rays) out.push_back(normalize_unit_volume(p, ray).to_doubles());
  return out;
}

Trajectory integrate_flow(const Parameters& p, const std::array<double, 2>& x0, const IntegrateOptions& options) {
  if (!p.reduced_ok()) throw DomainError("a1a2a3 = 0: the reduced flow is undefined for " + p.str());
  if (!(x0[0] > 0.0) || !(x0[1] > 0.0)) throw DomainError("initial point must be positive");
  const auto a = p.to_doubles();
  const auto eqs = options.equilibria.empty() ? unit_volume_equilibria(p) : options.equilibria;
  if (options.log_coordinates) {
    auto to_x = [&](const Vec<2>& y) {
      const double x1 = std::exp(y[0]);
      const double x2 = std::exp(y[1]);
      return std::array<double, 3>{x1, x2, formula::phi(a, x1, x2)};
    };
    auto field = [&](const Vec<2>& y) {
      const double x1 = std::exp(y[0]);
      const double x2 = std::exp(y[1]);
      const auto f = formula::field2(a, x1, x2);
      return std::pair{Vec<2>{f[0] / x1, f[1] / x2}, std::max(std::abs(f[0]), std::abs(f[1]))};
    };
    return drive<2>(p, {std::log(x0[0]), std::log(x0[1])}, options, to_x, field, eqs);
  }
  auto to_x = [&](const Vec<2>& x) { return std::array<double, 3>{x[0], x[1], formula::phi(a, x[0], x[1])}; };
  auto field = [&](const Vec<2>& x) {
    if (!(x[0] > 0.0) || !(x[1] > 0.0)) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return std::pair{Vec<2>{nan, nan}, nan};
    }
    const auto f = formula::field2(a, x[0], x[1]);
    return std::pair{Vec<2>{f[0], f[1]}, std::max(std::abs(f[0]), std::abs(f[1]))};
  };
  return drive<2>(p, {x0[0], x0[1]}, options, to_x, field, eqs);
}

Trajectory integrate_flow_3d(const Parameters& p, const std::array<double, 3>& x0, const IntegrateOptions& options) {
  if (!p.reduced_ok()) throw DomainError("a1a2a3 = 0: the flow is undefined for " + p.str());
  if (!(x0[0] > 0.0) || !(x0[1] > 0.0) || !(x0[2] > 0.0)) throw DomainError("initial point must be positive");
  const auto a = p.to_doubles();
  const auto eqs = options.equilibria.empty() ? unit_volume_equilibria(p) : options.equilibria;
  auto norm3 = [](const std::array<double, 3>& f) {
    return std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])});
  };
  if (options.log_coordinates) {
    auto to_x = [](const Vec<3>& y) { return std::array<double, 3>{std::exp(y[0]), std::exp(y[1]), std::exp(y[2])}; };
    auto field = [&](const Vec<3>& y) {
      const auto x = to_x(y);
      const auto f = formula::field3<double>(a, x);
      return std::pair{Vec<3>{f[0] / x[0], f[1] / x[1], f[2] / x[2]}, norm3(f)};
    };
    return drive<3>(p, {std::log(x0[0]), std::log(x0[1]), std::log(x0[2])}, options, to_x, field, eqs);
  }
  auto to_x = [](const Vec<3>& x) { return std::array<double, 3>{x[0], x[1], x[2]}; };
  auto field = [&](const Vec<3>& x) {
    if (!(x[0] > 0.0) || !(x[1] > 0.0) || !(x[2] > 0.0)) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return std::pair{Vec<3>{nan, nan, nan}, nan};
    }
    const auto f = formula::field3<double>(a, x);
    return std::pair{Vec<3>{f[0], f[1], f[2]}, norm3(f)};
  };
  return drive<3>(p, x0, options, to_x, field, eqs);
}

LimitReport classify_limit(const Parameters& p, const Trajectory& traj,
                           const std::vector<std::array<double, 3>>& equilibria) {
  LimitReport report;
  report.status = traj.status;
  if (traj.samples.empty()) return report;
  const auto& last = traj.samples.back();
  const std::array<double, 3> x{last.x1, last.x2, last.x3};
  const auto a = p.to_doubles();
  const auto targets = on_level(a, equilibria, formula::log_volume(a, x));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const double d = relative_distance(x, targets[k]);
    if (d < best) {
      best = d;
      report.equilibrium = static_cast<int>(k);
    }
  }
  report.distance = best;
  if (best <= 1e-5) {
    report.status = TrajectoryStatus::ConvergedTo;
    return report;
  }
  report.equilibrium = -1;
  if (traj.status == TrajectoryStatus::LeftDomain) report.exit_face = exit_face(x);
  if (report.status == TrajectoryStatus::ConvergedTo) report.status = TrajectoryStatus::MaxTimeReached;
  return report;
}

const char* to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::ConvergedTo: return "converged";
    case TrajectoryStatus::LeftDomain: return "left_domain";
    case TrajectoryStatus::MaxTimeReached: return "max_time_reached";
    case TrajectoryStatus::StepUnderflow: return "step_underflow";
  }
  return "?";
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x1,x2,x3,V\n";
  for (const auto& s : traj.samples) out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.t, s.x1, s.x2, s.x3, s.V);
}

void to_json(nlohmann::json& j, const Trajectory& traj) {
  j = {{"status", to_string(traj.status)},
       {"equilibrium", traj.equilibrium},
       {"max_volume_drift", traj.max_volume_drift},
       {"accepted_steps", traj.accepted_steps},
       {"rejected_steps", traj.rejected_steps},
       {"samples", traj.samples.size()},
       {"detail", traj.detail}};
}

}  // namespace wallach
