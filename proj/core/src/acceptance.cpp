#include "wallach/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "wallach/blowup.hpp"
#include "wallach/equilibria.hpp"
#include "wallach/integrate.hpp"
#include "wallach/linearize.hpp"
#include "wallach/surfaces.hpp"

namespace wallach {

namespace {

/// Collects failed expectations for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (!ok) failures_.push_back(what);
  }
  bool passed() const { return failures_.empty(); }
  std::string summary() const {
    if (failures_.empty()) return fmt::format("{} checks", total_);
    std::string s = fmt::format("{}/{} checks failed: ", failures_.size(), total_);
    for (std::size_t i = 0; i < failures_.size() && i < 6; ++i) s += (i ? "; " : "") + failures_[i];
    if (failures_.size() > 6) s += "; ...";
    return s;
  }

 private:
  int total_ = 0;
  std::vector<std::string> failures_;
};

struct Context {
  const AcceptanceOptions& options;
  std::mt19937_64 rng;

  F2Form form(const Parameters& p) const {
    F2Form f = f2_form(p);
    if (options.f2_x1_quartic_shift != 0.0) f.coeff(4, 0, 0) += Scalar(options.f2_x1_quartic_shift);
    return f;
  }
  Linearization lin(const Parameters& p, const MetricPoint& x) const { return linearize_at(p, x, form(p)); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
};

Scalar R(long n, long d) { return Scalar::ratio(n, d); }

const EquilibriumRay* find_rep(const Census& c, const Scalar& x1, const Scalar& x2) {
  for (const auto& r : c.rays) {
    if (r.rep[0] == x1 && r.rep[1] == x2) return &r;
  }
  return nullptr;
}

bool close(double v, double want, double tol) { return std::abs(v - want) <= tol; }

std::string pt(const Scalar& x1, const Scalar& x2) { return "(" + x1.str() + "," + x2.str() + ")"; }

/// Census of a three-equal parameter set at exact points, against expected delta values.
void expect_deltas(Check& check, const Context& ctx, const Parameters& p, const Census& census,
                   const std::vector<std::pair<std::array<Scalar, 2>, Scalar>>& expected) {
  check.expect(census.distinct() == static_cast<int>(expected.size()),
               fmt::format("{} rays, expected {}", census.distinct(), expected.size()));
  for (const auto& [xy, delta] : expected) {
    const auto* ray = find_rep(census, xy[0], xy[1]);
    check.expect(ray != nullptr, "missing representative " + pt(xy[0], xy[1]));
    if (!ray) continue;
    const auto l = ctx.lin(p, ray->rep);
    check.expect(l.delta == delta, "delta" + pt(xy[0], xy[1]) + " = " + l.delta.str() + ", expected " + delta.str());
  }
}

void a1(Check& check, Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const Parameters p(R(1, 6), R(1, 6), R(1, 6));
  const Census census = solve_all(p);
  expect_deltas(check, ctx, p, census,
                {{{1, 1}, R(1, 9)}, {{2, 1}, R(-2, 9)}, {{R(1, 2), R(1, 2)}, R(-8, 9)}, {{1, 2}, R(-2, 9)}});
  if (const auto* r = find_rep(census, 1, 1)) {
    const auto l = ctx.lin(p, r->rep);
    check.expect(l.rho == R(2, 3), "rho(1,1) = " + l.rho.str());
    check.expect(l.sigma == Scalar(0), "sigma(1,1) = " + l.sigma.str());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.expect(secs < 1.0, fmt::format("runtime {:.3f} s", secs));
}

void a2(Check& check, Context& ctx) {
  const Parameters p(R(7, 15), R(7, 15), R(7, 15));
  const Census census = solve_all(p);
  expect_deltas(check, ctx, p, census,
                {{{1, 1}, R(169, 25)},
                 {{R(1, 14), 1}, R(-4901, 225)},
                 {{1, R(1, 14)}, R(-4901, 225)},
                 {{14, 14}, R(-4901, 44100)}});
  if (const auto* r = find_rep(census, 1, 1)) {
    const auto l = ctx.lin(p, r->rep);
    check.expect(l.rho == R(-26, 25), "rho(1,1) = " + l.rho.str() + ", expected -26/25");
    check.expect(classify(l).kind == PointKind::StableNode, std::string("(1,1) is ") + to_string(classify(l).kind));
  }
}

void a3(Check& check, Context& ctx) {
  const Parameters p(R(1, 6), R(1, 4), R(1, 3));
  const Census census = solve_all(p);
  check.expect(census.distinct() == 2, fmt::format("{} rays, expected 2", census.distinct()));
  for (const auto& r : census.rays) {
    const auto kind = classify(ctx.lin(p, r.rep)).kind;
    check.expect(kind == PointKind::Saddle, r.rep.str() + " is " + to_string(kind));
  }
  const auto* exact = find_rep(census, R(4, 5), R(3, 5));
  check.expect(exact != nullptr, "missing (4/5,3/5)");
  if (exact) {
    const auto l = ctx.lin(p, exact->rep);
    check.expect(l.delta == R(-35, 72), "delta(4/5,3/5) = " + l.delta.str());
  }
  bool found = false;
  for (const auto& r : census.rays) {
    const auto x = r.rep.to_doubles();
    if (close(x[0], 2.284185494, 1e-6) && close(x[1], 2.372799295, 1e-6)) {
      found = true;
      const double d = ctx.lin(p, r.rep).delta.to_double();
      check.expect(close(d, -0.0982, 5e-4), fmt::format("delta at second point = {:.6g}", d));
    }
  }
  check.expect(found, "no ray within 1e-6 of (2.284185494, 2.372799295)");
}

void a4(Check& check, Context&) {
  for (int k = 1; k <= 20; ++k) {
    const Scalar s = R(k, 40);
    const Scalar q = q_eval(std::array<Scalar, 3>{s, s, s});
    const Scalar closed = pow(2 * s + 1, 4) * pow(4 * s - 1, 8);
    check.expect((q + closed).is_zero(), "Q(s,s,s) identity at s = " + s.str());
  }
  const double lo = std::sqrt(2.0 * std::sqrt(2.0) - 2.0) / 2.0;
  const double hi = std::sqrt(2.0) / 2.0;
  for (int k = 0; k < 20; ++k) {
    const double s = lo + (hi - lo) * (k + 0.5) / 20.0;
    const Parameters p = sigma_zero_family(SigmaFamily::TwoEqual, Scalar(s), 3);
    const double q = q_eval(p.to_doubles());
    const double s2 = s * s;
    const double closed = std::pow(s, 8) * (1 - 8 * s2 - 4 * s2 * s2) * std::pow(1 - 2 * s2, 3) * std::pow(3 - 2 * s2, 3);
    check.expect(std::abs(q - closed) <= 1e-10 * std::abs(closed),
                 fmt::format("TwoEqual family at s = {:.6f}: Q = {:.10g}, closed form {:.10g}", s, q, closed));
  }
}

void a5(Check& check, Context& ctx) {
  const Parameters p(R(1, 4), R(1, 4), R(1, 4));
  const Census census = solve_all(p);
  check.expect(census.distinct() == 1, fmt::format("{} rays, expected 1", census.distinct()));
  const auto* r = find_rep(census, 1, 1);
  check.expect(r != nullptr, "missing (1,1)");
  if (r) {
    const auto l = ctx.lin(p, r->rep);
    check.expect(l.rho.is_zero() && l.delta.is_zero() && l.sigma.is_zero(),
                 "rho, delta, sigma = " + l.rho.str() + ", " + l.delta.str() + ", " + l.sigma.str());
  }
  const auto report = blowup_linearizations();
  const std::vector<Scalar> roots{-2, R(-1, 2), 1};
  const std::vector<Scalar> betas{R(3, 2), R(-3, 4), R(3, 2)};
  check.expect(report.points.size() == 3, fmt::format("{} blow-up points", report.points.size()));
  for (std::size_t i = 0; i < report.points.size() && i < 3; ++i) {
    const auto& b = report.points[i];
    check.expect(b.u == roots[i], "root " + b.u.str() + ", expected " + roots[i].str());
    check.expect(b.beta == betas[i], "beta " + b.beta.str() + ", expected " + betas[i].str());
    check.expect(b.kind == PointKind::Saddle, "u = " + b.u.str() + " is " + to_string(b.kind));
  }
}

void a6(Check& check, Context& ctx) {
  int draws = 0;
  double worst = 0.0;
  while (draws < 100000) {
    const std::array<double, 3> a{ctx.uniform(-1, 1), ctx.uniform(-1, 1), ctx.uniform(-1, 1)};
    if (!(a[0] * a[1] + a[0] * a[2] + a[1] * a[2] > 0.0)) continue;
    ++draws;
    const Parameters p{Scalar(a[0]), Scalar(a[1]), Scalar(a[2])};
    const MetricPoint x(std::array<double, 3>{ctx.uniform(0.1, 10), ctx.uniform(0.1, 10), ctx.uniform(0.1, 10)});
    worst = std::min(worst, sigma_expression(p, x).to_double());
  }
  check.expect(worst >= -1e-12, fmt::format("min sigma over 1e5 float draws = {:.3g}", worst));
  for (int k = 0; k < 200; ++k) {
    std::uniform_int_distribution<long> num(1, 49);
    std::array<long, 6> n{};
    for (auto& v : n) v = num(ctx.rng);
    const Parameters p(R(n[0], 100), R(n[1], 100), R(n[2], 100));
    const MetricPoint x(R(n[3], 7), R(n[4], 11), R(n[5], 13));
    const Scalar s = sigma_expression(p, x);
    check.expect(s.is_exact() && s.sign() >= 0, "exact sigma < 0 at " + p.str() + ", " + x.str());
  }
  for (int k = 0; k < 100; ++k) {
    const std::array<double, 3> a{ctx.uniform(0.01, 0.5), ctx.uniform(0.01, 0.5), ctx.uniform(0.01, 0.5)};
    const Parameters p{Scalar(a[0]), Scalar(a[1]), Scalar(a[2])};
    const MetricPoint x(std::array<double, 3>{std::sqrt(a[1] + a[2]), std::sqrt(a[0] + a[2]), std::sqrt(a[0] + a[1])});
    const double s = sigma_expression(p, x).to_double();
    check.expect(std::abs(s) <= 1e-12, fmt::format("sigma on the minimizing ray = {:.3g} at {}", s, p.str()));
  }
}

void a7(Check& check, Context& ctx) {
  for (int k = 1; k <= 20; ++k) {
    for (const auto& z : sigma_zero_points(SigmaFamily::Equal, R(k, 40))) {
      const double s = ctx.lin(z.params, z.point).sigma.to_double();
      check.expect(std::abs(s) <= 1e-10, fmt::format("Equal family s = {}/40: sigma = {:.3g}", k, s));
    }
  }
  const double lo = std::sqrt(2.0 * std::sqrt(2.0) - 2.0) / 2.0;
  const double hi = std::sqrt(2.0) / 2.0;
  for (int k = 0; k < 20; ++k) {
    const double sv = lo + (hi - lo) * (k + 0.5) / 20.0;
    for (const auto& z : sigma_zero_points(SigmaFamily::TwoEqual, Scalar(sv))) {
      const double s = ctx.lin(z.params, z.point).sigma.to_double();
      check.expect(std::abs(s) <= 1e-10, fmt::format("TwoEqual s = {:.6f}, k = {}: sigma = {:.3g}", sv, z.k, s));
    }
  }
  int tested = 0;
  while (tested < 200) {
    const std::array<double, 3> a{ctx.uniform(0.01, 0.5), ctx.uniform(0.01, 0.5), ctx.uniform(0.01, 0.5)};
    if (a[0] == a[1] || a[1] == a[2] || a[0] == a[2]) continue;
    ++tested;
    const Parameters p{Scalar(a[0]), Scalar(a[1]), Scalar(a[2])};
    for (const auto& r : solve_all(p).rays) {
      const double s = ctx.lin(p, r.rep).sigma.to_double();
      check.expect(std::abs(s) > 1e-10, fmt::format("sigma = {:.3g} at {} for {}", s, r.rep.str(), p.str()));
    }
  }
}

void a8(Check& check, Context& ctx) {
  const std::array<Scalar, 3> quarter{R(1, 4), R(1, 4), R(1, 4)};
  check.expect(q1_eval(quarter).is_zero(), "Q1(1/4,1/4,1/4) = " + q1_eval(quarter).str());
  const auto g = grad_q1(quarter);
  check.expect(g[0].is_zero() && g[1].is_zero() && g[2].is_zero(), "grad Q1(1/4,1/4,1/4) is not zero");
  int built = 0;
  int attempts = 0;
  while (built < 20 && attempts < 100000) {
    ++attempts;
    const double a1v = ctx.uniform(0.01, 0.5);
    const double a2v = ctx.uniform(0.01, 0.5);
    const double s = a1v + a2v;
    const double qa = 4 * s;
    const double qb = 4 * s * s - 2;
    const double qc = 4 * s * a1v * a2v - 2 * s + 1;
    const double disc = qb * qb - 4 * qa * qc;
    if (disc < 0) continue;
    for (const double a3v : {(-qb - std::sqrt(disc)) / (2 * qa), (-qb + std::sqrt(disc)) / (2 * qa)}) {
      if (built >= 20 || !(a3v > 0.01 && a3v < 0.5)) continue;
      ++built;
      const Parameters p{Scalar(a1v), Scalar(a2v), Scalar(a3v)};
      double best = std::numeric_limits<double>::infinity();
      for (const auto& r : solve_all(p).rays) best = std::min(best, std::abs(ctx.lin(p, r.rep).rho.to_double()));
      check.expect(best <= 1e-8, fmt::format("min |rho| = {:.3g} at {} (Q1 = {:.2g})", best, p.str(),
                                             q1_eval(p).to_double()));
    }
  }
  check.expect(built == 20, fmt::format("only {} Q1 roots constructed", built));
}

void a9(Check& check, Context&) {
  const Parameters p(R(5, 36), R(1, 6), R(1, 4));
  const Scalar d3 = quartic_discriminant(p);
  check.expect(d3.is_exact() && d3.is_zero(), "D3 = " + d3.str());
  const Census census = solve_all(p);
  check.expect(census.distinct() == 3, fmt::format("{} rays, expected 3", census.distinct()));
  int doubles = 0;
  for (const auto& r : census.rays) doubles += r.multiplicity == 2 ? 1 : 0;
  check.expect(doubles == 1, fmt::format("{} double roots, expected 1", doubles));
}

void a10(Check& check, Context& ctx) {
  const std::vector<Parameters> sets{Parameters(R(1, 6), R(1, 6), R(1, 6)), Parameters(R(7, 15), R(7, 15), R(7, 15)),
                                     Parameters(R(1, 6), R(1, 4), R(1, 3))};
  for (const auto& p : sets) {
    for (const auto& r : solve_all(p).rays) {
      const MetricPoint x = normalize_unit_volume(p, r);
      const auto xd = x.to_doubles();
      const auto l = ctx.lin(p, x);
      const auto j = jacobian_2d_fd(p, xd[0], xd[1]);
      const double tr = j[0][0] + j[1][1];
      const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
      const double rho = l.rho.to_double();
      const double delta = l.delta.to_double();
      check.expect(std::abs(tr - rho) <= 1e-6 * std::max(1.0, std::abs(rho)),
                   fmt::format("{} at {}: FD trace {:.10g} vs rho {:.10g}", p.str(), r.rep.str(), tr, rho));
      check.expect(std::abs(det - delta) <= 1e-6 * std::max(1.0, std::abs(delta)),
                   fmt::format("{} at {}: FD det {:.10g} vs delta {:.10g}", p.str(), r.rep.str(), det, delta));
      const auto ev = eigenvalues(jacobian_3d_fd(p, xd));
      double smallest = std::numeric_limits<double>::infinity();
      double largest = 0.0;
      for (const auto& e : ev) {
        smallest = std::min(smallest, std::abs(e));
        largest = std::max(largest, std::abs(e));
      }
      check.expect(smallest <= 1e-6 * std::max(1.0, largest),
                   fmt::format("{} at {}: smallest 3D eigenvalue {:.3g}", p.str(), r.rep.str(), smallest));
    }
  }
}

void a11(Check& check, Context& ctx) {
  const std::vector<Parameters> sets{Parameters(R(1, 6), R(1, 6), R(1, 6)), Parameters(R(7, 15), R(7, 15), R(7, 15)),
                                     Parameters(R(1, 6), R(1, 4), R(1, 3))};
  IntegrateOptions opts;
  opts.rel_tol = 1e-10;
  opts.t_max = 50.0;
  for (int k = 0; k < 10; ++k) {
    const Parameters& p = sets[static_cast<std::size_t>(k) % sets.size()];
    const std::array<double, 3> x0{ctx.uniform(0.5, 2.0), ctx.uniform(0.5, 2.0), ctx.uniform(0.5, 2.0)};
    const auto t3 = integrate_flow_3d(p, x0, opts);
    check.expect(t3.max_volume_drift <= 1e-7,
                 fmt::format("3D drift {:.3g} from ({:.4f},{:.4f},{:.4f})", t3.max_volume_drift, x0[0], x0[1], x0[2]));
    const auto t2 = integrate_flow(p, {x0[0], x0[1]}, opts);
    check.expect(t2.max_volume_drift <= 1e-8, fmt::format("2D drift {:.3g}", t2.max_volume_drift));
  }
}

void a12(Check& check, Context&) {
  const auto start = std::chrono::steady_clock::now();
  check.expect(component_classify(Parameters(R(1, 6), R(1, 6), R(1, 6))) == Region::O1, "(1/6,1/6,1/6) not O1");
  check.expect(component_classify(Parameters(R(7, 15), R(7, 15), R(7, 15))) == Region::O2, "(7/15,7/15,7/15) not O2");
  check.expect(component_classify(Parameters(R(1, 6), R(1, 4), R(1, 3))) == Region::O3, "(1/6,1/4,1/3) not O3");
  ScanOptions so;
  so.spacing = GridSpacing::CellCentered;
  so.threads = 1;
  const auto samples = scan_grid(Scalar(0), R(1, 2), 9, so);
  int counts[5] = {0, 0, 0, 0, 0};
  for (const auto& s : samples) {
    ++counts[static_cast<int>(s.region)];
    if (s.region == Region::Outside) {
      check.expect(false, fmt::format("({}, {}, {}) is Outside", s.a[0].str(), s.a[1].str(), s.a[2].str()));
      continue;
    }
    if (s.region == Region::OnOmega) continue;
    const Parameters p(s.a[0], s.a[1], s.a[2]);
    const Census c = solve_all(p);
    int saddles = 0;
    int stable = 0;
    int unstable = 0;
    for (const auto& r : c.rays) {
      const auto kind = classify(linearize_at(p, r)).kind;
      saddles += kind == PointKind::Saddle;
      stable += kind == PointKind::StableNode;
      unstable += kind == PointKind::UnstableNode;
    }
    const bool ok = (s.region == Region::O3 && c.distinct() == 2 && saddles == 2) ||
                    (s.region == Region::O1 && c.distinct() == 4 && saddles == 3 && unstable == 1) ||
                    (s.region == Region::O2 && c.distinct() == 4 && saddles == 3 && stable == 1);
    check.expect(ok, fmt::format("census at {} disagrees with label {}", p.str(), to_string(s.region)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.expect(samples.size() == 729, fmt::format("{} samples", samples.size()));
  const auto quarter = std::find_if(samples.begin(), samples.end(), [](const SurfaceSample& s) {
    return s.a[0].to_double() == 0.25 && s.a[1].to_double() == 0.25 && s.a[2].to_double() == 0.25;
  });
  check.expect(quarter != samples.end() && quarter->region == Region::OnOmega, "(1/4,1/4,1/4) not labelled OnOmega");
  check.expect(counts[static_cast<int>(Region::OnOmega)] == 1,
               fmt::format("{} OnOmega samples, expected 1", counts[static_cast<int>(Region::OnOmega)]));
  check.expect(secs < 60.0, fmt::format("runtime {:.1f} s", secs));
}

struct Criterion {
  const char* id;
  const char* anchor;
  std::function<void(Check&, Context&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"A1", "equilibrium census and exact invariants at (1/6,1/6,1/6)", a1},
      {"A2", "equilibrium census and exact invariants at (7/15,7/15,7/15)", a2},
      {"A3", "two saddles at (1/6,1/4,1/3)", a3},
      {"A4", "closed forms of Q on the diagonal and on the two-equal sigma=0 family", a4},
      {"A5", "fully degenerate point at (1/4,1/4,1/4) and its blow-up", a5},
      {"A6", "sigma >= 0 whenever a1a2+a1a3+a2a3 > 0", a6},
      {"A7", "equilibria with sigma = 0 only on the two parameter families", a7},
      {"A8", "some equilibrium has rho = 0 on the trace surface Q1 = 0", a8},
      {"A9", "double quartic root at (5/36,1/6,1/4)", a9},
      {"A10", "finite-difference Jacobians agree with F1/F2; 3D Jacobian is singular", a10},
      {"A11", "volume is a first integral along integrated trajectories", a11},
      {"A12", "component labels O1/O2/O3 and a 9^3 interior scan", a12},
  };
  return all;
}

}  // namespace

std::vector<AcceptanceResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<AcceptanceResult> results;
  for (const auto& c : criteria()) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) {
      continue;
    }
    Context ctx{options, std::mt19937_64(options.seed)};
    Check check;
    AcceptanceResult r{c.id, c.anchor, false, {}, 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(check, ctx);
      r.passed = check.passed();
      r.detail = check.summary();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

void to_json(nlohmann::json& j, const AcceptanceResult& r) {
  j = {{"id", r.id}, {"anchor", r.anchor}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}};
}

}  // namespace wallach
