#include "wallach/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace wallach {

namespace {

bool in_half_open(const Scalar& v) { return v.sign() > 0 && v <= Scalar::ratio(1, 2); }
bool in_open(const Scalar& v) { return v.sign() > 0 && v < Scalar::ratio(1, 2); }

MetricPoint to_x3_one(const MetricPoint& x) {
  const Scalar inv = Scalar(1) / x[2];
  return MetricPoint(x[0] * inv, x[1] * inv, Scalar(1));
}

EquilibriumRay make_ray(const MetricPoint& native, Convention convention, FamilyTag tag, int index = 0,
                        int multiplicity = 1, bool ill = false) {
  return EquilibriumRay{to_x3_one(native), native, convention, tag, index, multiplicity, ill};
}

double relative_distance(const std::array<double, 2>& u, const std::array<double, 2>& v) {
  const double scale = std::max({1.0, std::abs(u[0]), std::abs(u[1])});
  return std::max(std::abs(u[0] - v[0]), std::abs(u[1] - v[1])) / scale;
}

std::array<double, 2> rep_xy(const EquilibriumRay& r) { return {r.rep[0].to_double(), r.rep[1].to_double()}; }

bool same_point(const MetricPoint& u, const MetricPoint& v) {
  if (u.exact() && v.exact()) return u[0] == v[0] && u[1] == v[1] && u[2] == v[2];
  const auto a = to_x3_one(u);
  const auto b = to_x3_one(v);
  return relative_distance({a[0].to_double(), a[1].to_double()}, {b[0].to_double(), b[1].to_double()}) <= 1e-12;
}

/// Merges coinciding rays, summing multiplicities; the first occurrence keeps its tag.
void merge_identical(std::vector<EquilibriumRay>& rays) {
  std::vector<EquilibriumRay> out;
  for (auto& r : rays) {
    auto it = std::find_if(out.begin(), out.end(), [&](const EquilibriumRay& o) { return same_point(o.rep, r.rep); });
    if (it == out.end()) {
      out.push_back(std::move(r));
    } else {
      it->multiplicity += r.multiplicity;
      it->ill_conditioned = it->ill_conditioned || r.ill_conditioned;
    }
  }
  rays = std::move(out);
}

struct NewtonState {
  std::array<double, 2> x;
  double norm;
};

double residual_size(const std::array<double, 3>& a, double x1, double x2) {
  const auto e = formula::equilibrium_residual<double>(a, {x1, x2, 1.0});
  const double scale = std::max({1.0, x1 * x1, x2 * x2});
  return std::max(std::abs(e[0]), std::abs(e[1])) / scale;
}

/// Damped Newton on (E1, E2) at x3 = 1. Returns nullopt if it leaves the positive quadrant.
std::optional<NewtonState> newton(const std::array<double, 3>& a, std::array<double, 2> x, int max_iterations) {
  const double k1 = a[0] * a[1] + a[0] * a[2] + 2.0 * a[1] * a[2];
  const double k2 = a[0] * a[1] + 2.0 * a[0] * a[2] + a[1] * a[2];
  double norm = residual_size(a, x[0], x[1]);
  for (int it = 0; it < max_iterations && norm > 1e-15; ++it) {
    const auto e = formula::equilibrium_residual<double>(a, {x[0], x[1], 1.0});
    const double j11 = a[1] * x[1] + a[2] - 2.0 * k1 * x[0];
    const double j12 = (a[1] + a[2]) * (2.0 * a[0] * x[1] - 1.0) + a[1] * x[0];
    const double j21 = (a[0] + a[2]) * (2.0 * a[1] * x[0] - 1.0) + a[0] * x[1];
    const double j22 = a[0] * x[0] + a[2] - 2.0 * k2 * x[1];
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double d1 = -(j22 * e[0] - j12 * e[1]) / det;
    const double d2 = -(-j21 * e[0] + j11 * e[1]) / det;
    double lambda = 1.0;
    bool moved = false;
    for (int h = 0; h < 40; ++h, lambda *= 0.5) {
      const std::array<double, 2> y{x[0] + lambda * d1, x[1] + lambda * d2};
      if (!(y[0] > 0.0) || !(y[1] > 0.0)) continue;
      const double n = residual_size(a, y[0], y[1]);
      if (n < norm) {
        x = y;
        norm = n;
        moved = true;
        break;
      }
    }
    if (!moved) break;
    if (std::abs(lambda * d1) <= 1e-16 * x[0] && std::abs(lambda * d2) <= 1e-16 * x[1]) break;
  }
  if (!(x[0] > 0.0) || !(x[1] > 0.0) || !std::isfinite(norm)) return std::nullopt;
  return NewtonState{x, norm};
}

EquilibriumRay polish(const std::array<double, 3>& a, EquilibriumRay ray) {
  if (ray.rep.exact()) return ray;
  const auto xy = rep_xy(ray);
  if (residual_size(a, xy[0], xy[1]) <= 1e-12) return ray;
  if (auto s = newton(a, xy, 20); s && s->norm < residual_size(a, xy[0], xy[1])) {
    ray.rep = MetricPoint(std::array<double, 3>{s->x[0], s->x[1], 1.0});
  }
  return ray;
}

std::string point_str(const std::array<double, 2>& x) { return fmt::format("({:.10g}, {:.10g}, 1)", x[0], x[1]); }

}  // namespace

std::array<Scalar, 2> residual(const Parameters& p, const MetricPoint& x) {
  return formula::equilibrium_residual(p.a(), x.x());
}

double residual_norm(const Parameters& p, const MetricPoint& x) {
  const auto e = residual(p, x);
  const auto d = x.to_doubles();
  const double m = std::max({d[0], d[1], d[2]});
  return std::max(std::abs(e[0].to_double()), std::abs(e[1].to_double())) / (m * m);
}

TwoEqualResult solve_two_equal(const Scalar& b, const Scalar& c) {
  if (!in_half_open(b) || !in_half_open(c)) {
    throw DomainError("two-equal solver needs b, c in (0, 1/2], got b=" + b.str() + ", c=" + c.str());
  }
  const Scalar half = Scalar::ratio(1, 2);
  TwoEqualResult out;
  const Scalar d1 = Scalar(1) - 4 * (1 - 2 * c) * (b + c);
  const Scalar t = Scalar(1) - 4 * b - 2 * c + 16 * b * b * (b + c);
  out.discriminants.D1 = d1;
  out.discriminants.T = t;

  const Scalar bc2 = 2 * (b + c);
  if (c == half) {
    out.rays.push_back(make_ray(MetricPoint(b + c, b + c, Scalar(1)), Convention::FamilyQ1,
                                FamilyTag::TwoEqualDiagonal));
  } else if (d1.sign() == 0) {
    out.rays.push_back(
        make_ray(MetricPoint(bc2, bc2, Scalar(1)), Convention::FamilyQ1, FamilyTag::TwoEqualDiagonal, 0, 2));
  } else if (d1.sign() > 0) {
    const Scalar root = sqrt(d1);
    for (const Scalar& mu : {Scalar(1) - root, Scalar(1) + root}) {
      if (mu.sign() > 0) {
        out.rays.push_back(make_ray(MetricPoint(bc2, bc2, mu), Convention::FamilyQ1, FamilyTag::TwoEqualDiagonal));
      }
    }
  }

  if (b != half && t.sign() >= 0) {
    const Scalar qa = (b + c) * (1 - 4 * b * b);
    const Scalar qb = Scalar(1) - 2 * b + 8 * b * b * (b + c);
    const Scalar disc = qb * qb - 4 * qa * qa;
    auto push = [&](const Scalar& r, int multiplicity) {
      if (r.sign() > 0) {
        out.rays.push_back(make_ray(MetricPoint(r, Scalar(1), 2 * b * (r + 1)), Convention::FamilyQ1,
                                    FamilyTag::TwoEqualOffDiagonal, 0, multiplicity));
      }
    };
    if (disc.sign() <= 0) {
      push(qb / (2 * qa), 2);
    } else {
      const Scalar root = sqrt(disc);
      push((qb - root) / (2 * qa), 1);
      push((qb + root) / (2 * qa), 1);
    }
  }
  merge_identical(out.rays);
  return out;
}

std::vector<EquilibriumRay> solve_sum_half(const Parameters& p) {
  const auto& a = p.a();
  if (!in_open(a[0]) || !in_open(a[1]) || !in_open(a[2])) {
    throw DomainError("sum-half families need a_i in (0, 1/2), got " + p.str());
  }
  if (a[0] == a[1] || a[0] == a[2] || a[1] == a[2]) {
    throw DomainError("sum-half families need pairwise distinct a_i, got " + p.str());
  }
  if (std::abs((p.s1() - Scalar::ratio(1, 2)).to_double()) > 1e-12) {
    throw DomainError("sum-half families need a1 + a2 + a3 = 1/2, got " + p.str());
  }
  const Scalar u = 1 - 2 * a[0];
  const Scalar v = 1 - 2 * a[1];
  const Scalar w = 2 * (a[0] + a[1]);
  const std::array<MetricPoint, 4> natives{
      MetricPoint(u, v, w),
      MetricPoint(u, v, 2 * (1 - a[0] - a[1])),
      MetricPoint(u, 1 + 2 * a[1], w),
      MetricPoint(1 + 2 * a[0], v, w),
  };
  std::vector<EquilibriumRay> rays;
  for (int k = 0; k < 4; ++k) {
    rays.push_back(make_ray(natives[static_cast<std::size_t>(k)], Convention::FamilyQ1, FamilyTag::SumHalf, k + 1));
  }
  return rays;
}

std::array<Scalar, 5> quartic_coefficients(const Parameters& p) {
  const Scalar& a1 = p.a(0);
  const Scalar& a2 = p.a(1);
  const Scalar& a3 = p.a(2);
  const Scalar c4 = (a2 + a3) * (a2 + a3) * (2 * a1 - 1) * (2 * a1 + 1);
  const Scalar c3 = (a2 + a3) * (2 * a2 + 4 * a1 * a3 + 1 - 4 * a1 * a1);
  const Scalar c2 = 2 * a1 * a1 + 2 * a3 * a3 - 8 * a1 * a2 * a2 * a3 - 2 * a2 * a2 - 8 * a1 * a1 * a2 * a3 -
                    2 * a2 - 8 * a1 * a2 * a3 * a3 - 2 * a1 * a3 - a1 - a3 - 8 * a1 * a1 * a3 * a3;
  const Scalar c1 = (a1 + a2) * (4 * a1 * a3 + 2 * a2 + 1 - 4 * a3 * a3);
  const Scalar c0 = (2 * a3 - 1) * (2 * a3 + 1) * (a1 + a2) * (a1 + a2);
  return {c4, c3, c2, c1, c0};
}

Polynomial quartic_polynomial(const Parameters& p) {
  const auto c = quartic_coefficients(p);
  return Polynomial::from_descending({c.begin(), c.end()});
}

Scalar quartic_discriminant(const Parameters& p) { return discriminant(quartic_polynomial(p)); }

GeneralResult solve_general(const Parameters& p) {
  const Scalar& a1 = p.a(0);
  const Scalar& a2 = p.a(1);
  const Scalar& a3 = p.a(2);
  GeneralResult out;
  for (const auto& root : real_roots(quartic_polynomial(p))) {
    const Scalar& s = root.value;
    if (!(s.sign() > 0)) {
      out.diagnostics.push_back("quartic root s = " + s.str() + " is not positive; skipped");
      continue;
    }
    const Scalar den = (a2 + a3) * s - (a1 + a2);
    if (std::abs(den.to_double()) <= 1e-14) {
      out.diagnostics.push_back("quartic root s = " + s.str() + " makes the t-denominator vanish; skipped");
      continue;
    }
    const Scalar t = (2 * a1 * (a2 + a3) * s * s + (a3 - a1) * s - 2 * a3 * (a1 + a2)) / den;
    if (!(t.sign() > 0)) {
      out.diagnostics.push_back("quartic root s = " + s.str() + " gives t = " + t.str() + " <= 0; skipped");
      continue;
    }
    out.rays.push_back(make_ray(MetricPoint(Scalar(1), t, s), Convention::OneTS, FamilyTag::GeneralQuartic, 0,
                                root.multiplicity, root.ill_conditioned));
  }
  return out;
}

std::vector<std::array<double, 2>> newton_census(const Parameters& p, const SolveOptions& options) {
  const auto a = p.to_doubles();
  std::vector<std::array<double, 2>> found;
  const int n = std::max(1, options.grid);
  const double llo = std::log(options.grid_lo);
  const double lhi = std::log(options.grid_hi);
  auto at = [&](int i) { return n == 1 ? std::exp(llo) : std::exp(llo + (lhi - llo) * i / (n - 1)); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto s = newton(a, {at(i), at(j)}, options.max_iterations);
      if (!s || s->norm > 1e-10) continue;
      const bool known = std::any_of(found.begin(), found.end(),
                                     [&](const auto& f) { return relative_distance(f, s->x) <= 1e-6; });
      if (!known) found.push_back(s->x);
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

Census solve_all(const Parameters& p, const SolveOptions& options) {
  Census census;
  const auto& a = p.a();
  const auto ad = p.to_doubles();

  int pair_i = -1;
  int pair_j = -1;
  for (int i = 0; i < 3 && pair_i < 0; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (a[static_cast<std::size_t>(i)] == a[static_cast<std::size_t>(j)]) {
        pair_i = i;
        pair_j = j;
        break;
      }
    }
  }
  const bool distinct = pair_i < 0;
  const bool all_half_open = in_half_open(a[0]) && in_half_open(a[1]) && in_half_open(a[2]);

  std::vector<EquilibriumRay> closed;
  if (!distinct && all_half_open) {
    const int k = 3 - pair_i - pair_j;
    auto two = solve_two_equal(a[static_cast<std::size_t>(pair_i)], a[static_cast<std::size_t>(k)]);
    census.solver_case = SolverCase::TwoEqual;
    census.discriminants = two.discriminants;
    const std::array<int, 3> idx{pair_i, pair_j, k};
    for (auto& r : two.rays) {
      std::array<Scalar, 3> x;
      std::array<Scalar, 3> nat;
      for (int m = 0; m < 3; ++m) {
        x[static_cast<std::size_t>(idx[static_cast<std::size_t>(m)])] = r.rep[m];
        nat[static_cast<std::size_t>(idx[static_cast<std::size_t>(m)])] = r.native[m];
      }
      r.rep = to_x3_one(MetricPoint(x[0], x[1], x[2]));
      r.native = MetricPoint(nat[0], nat[1], nat[2]);
      closed.push_back(std::move(r));
    }
    merge_identical(closed);
  } else if (distinct && p.interior() && std::abs(ad[0] + ad[1] + ad[2] - 0.5) <= 1e-12) {
    census.solver_case = SolverCase::SumHalf;
    closed = solve_sum_half(p);
  } else if (distinct) {
    census.solver_case = SolverCase::General;
    census.discriminants.D3 = quartic_discriminant(p);
    auto general = solve_general(p);
    closed = std::move(general.rays);
    for (auto& d : general.diagnostics) census.diagnostics.push_back(std::move(d));
  } else {
    census.solver_case = SolverCase::NumericOnly;
    census.diagnostics.push_back("no closed form applies to " + p.str() + "; using the numeric census only");
  }

  for (auto& r : closed) r = polish(ad, std::move(r));

  if (options.numeric_census || census.solver_case == SolverCase::NumericOnly) {
    const auto numeric = newton_census(p, options);
    std::vector<bool> reached(closed.size(), false);
    for (const auto& x : numeric) {
      bool matched = false;
      for (std::size_t c = 0; c < closed.size(); ++c) {
        const bool loose = closed[c].multiplicity > 1 || closed[c].ill_conditioned;
        const double tol = loose ? options.multiple_root_tol : options.dedup_tol;
        if (relative_distance(rep_xy(closed[c]), x) <= tol) {
          matched = true;
          reached[c] = true;
        }
      }
      if (matched) continue;
      const MetricPoint pt(std::array<double, 3>{x[0], x[1], 1.0});
      closed.push_back(EquilibriumRay{pt, pt, Convention::X3One, FamilyTag::Numeric, 0, 1, false});
      if (census.solver_case != SolverCase::NumericOnly) {
        census.diagnostics.push_back("numeric census found " + point_str(x) + " missing from the closed form");
      }
    }
    for (std::size_t c = 0; c < reached.size(); ++c) {
      if (!reached[c]) {
        census.diagnostics.push_back("closed-form ray " + closed[c].rep.str() +
                                     " was not reached by the Newton multi-start");
      }
    }
  }

  std::sort(closed.begin(), closed.end(), [](const EquilibriumRay& l, const EquilibriumRay& r) {
    return rep_xy(l) < rep_xy(r);
  });
  census.rays = std::move(closed);
  if (p.wallach_range() && (census.rays.empty() || census.rays.size() > 4)) {
    census.diagnostics.push_back(fmt::format("{} distinct rays found; expected between 1 and 4", census.rays.size()));
  }
  return census;
}

MetricPoint normalize_unit_volume(const Parameters& p, const MetricPoint& x) {
  if (!p.reduced_ok()) throw DomainError("a1a2a3 = 0: volume normalization is undefined for " + p.str());
  const double lv = log_volume(p, x);
  if (lv == 0.0 && x.exact()) return x;
  const auto ad = p.to_doubles();
  const double q = std::exp(-lv / (1.0 / ad[0] + 1.0 / ad[1] + 1.0 / ad[2]));
  return x.scaled(Scalar(q));
}

MetricPoint normalize_unit_volume(const Parameters& p, const EquilibriumRay& ray) {
  return normalize_unit_volume(p, ray.rep);
}

const char* to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::TwoEqualDiagonal: return "two_equal_diagonal";
    case FamilyTag::TwoEqualOffDiagonal: return "two_equal_off_diagonal";
    case FamilyTag::SumHalf: return "sum_half";
    case FamilyTag::GeneralQuartic: return "general_quartic";
    case FamilyTag::Numeric: return "numeric";
  }
  return "?";
}

const char* to_string(Convention convention) {
  switch (convention) {
    case Convention::X3One: return "x3=1";
    case Convention::OneTS: return "(1,t,s)";
    case Convention::FamilyQ1: return "family(q=1)";
  }
  return "?";
}

const char* to_string(SolverCase solver_case) {
  switch (solver_case) {
    case SolverCase::TwoEqual: return "two_equal";
    case SolverCase::SumHalf: return "sum_half";
    case SolverCase::General: return "general";
    case SolverCase::NumericOnly: return "numeric_only";
  }
  return "?";
}

}  // namespace wallach
