#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "wallach/equilibria.hpp"
#include "wallach/linearize.hpp"

using namespace wallach;

namespace {

Scalar R(long n, long d) { return Scalar::ratio(n, d); }

oracle::A3 ld(const Parameters& p) {
  const auto a = p.to_doubles();
  return {a[0], a[1], a[2]};
}

Linearization make(const Scalar& rho, const Scalar& delta) {
  Linearization l;
  l.rho = rho;
  l.delta = delta;
  l.sigma = rho * rho - 4 * delta;
  return l;
}

const double kS1 = std::sqrt(2.0 * std::sqrt(2.0) - 2.0) / 2.0;
const double kS2 = std::sqrt(2.0) / 2.0;

}  // namespace

TEST_CASE("f1 and f2") {
  const Parameters p(R(1, 6), R(1, 6), R(1, 6));
  CHECK(f1(p, MetricPoint(1, 1, 1)) == p.A() / 3);
  CHECK(f2(p, MetricPoint(1, 1, 1)) == p.A() * p.A() / 9);
  CHECK(f2(Parameters(R(1, 4), R(1, 4), R(1, 4)), MetricPoint(1, 1, 1)).is_zero());

  const Parameters q(R(1, 5), R(2, 7), R(3, 8));
  const MetricPoint x(R(3, 2), R(2, 5), 3);
  const Scalar l = R(5, 3);
  CHECK(f1(q, x.scaled(l)) == l * l * f1(q, x));
  CHECK(f2(q, x.scaled(l)) == l * l * l * l * f2(q, x));
  CHECK(evaluate(f2_form(q), x) == f2(q, x));
}

TEST_CASE("linearize_at matches exact values") {
  SUBCASE("(1/6,1/6,1/6)") {
    const Parameters p(R(1, 6), R(1, 6), R(1, 6));
    const auto l = linearize_at(p, MetricPoint(1, 1, 1));
    CHECK(l.rho == R(2, 3));
    CHECK(l.delta == R(1, 9));
    CHECK(l.sigma.is_zero());
    CHECK(linearize_at(p, MetricPoint(2, 1, 1)).delta == R(-2, 9));
    CHECK(linearize_at(p, MetricPoint(R(1, 2), R(1, 2), 1)).delta == R(-8, 9));
  }
  SUBCASE("(7/15,7/15,7/15)") {
    const Parameters p(R(7, 15), R(7, 15), R(7, 15));
    CHECK(linearize_at(p, MetricPoint(14, 14, 1)).delta == R(-4901, 44100));
    CHECK(linearize_at(p, MetricPoint(R(1, 14), 1, 1)).delta == R(-4901, 225));
  }
  SUBCASE("(1/6,1/4,1/3)") {
    const Parameters p(R(1, 6), R(1, 4), R(1, 3));
    CHECK(linearize_at(p, MetricPoint(R(4, 5), R(3, 5), 1)).delta == R(-35, 72));
  }
  CHECK_THROWS_AS(linearize_at(Parameters(R(1, 6), R(1, 6), R(1, 6)), MetricPoint(1, 2, 3)), DomainError);
}

TEST_CASE("(7/15,7/15,7/15) at (1,1,1) agrees with finite differences") {
  const Parameters p(R(7, 15), R(7, 15), R(7, 15));
  const auto l = linearize_at(p, MetricPoint(1, 1, 1));
  CHECK(l.rho == R(-26, 15));
  CHECK(l.delta == R(169, 225));
  CHECK(l.sigma.is_zero());
  CHECK(classify(l).kind == PointKind::StableNode);
  const auto j = oracle::jacobian2(ld(p), 1, 1);
  CHECK(static_cast<double>(j[0][0] + j[1][1]) == doctest::Approx(-26.0 / 15.0).epsilon(1e-8));
  CHECK(static_cast<double>(j[0][0] * j[1][1] - j[0][1] * j[1][0]) == doctest::Approx(169.0 / 225.0).epsilon(1e-8));
}

TEST_CASE("rho and delta equal the trace and determinant of the reduced Jacobian") {
  oracle::Draw draw(37);
  int checked = 0;
  for (int k = 0; k < 60; ++k) {
    const Parameters p{Scalar(draw(0.05, 0.45)), Scalar(draw(0.05, 0.45)), Scalar(draw(0.05, 0.45))};
    for (const auto& r : solve_all(p).rays) {
      const MetricPoint x = normalize_unit_volume(p, r);
      const auto xd = x.to_doubles();
      const auto l = linearize_at(p, x);
      const auto j = oracle::jacobian2(ld(p), xd[0], xd[1]);
      const double tr = static_cast<double>(j[0][0] + j[1][1]);
      const double det = static_cast<double>(j[0][0] * j[1][1] - j[0][1] * j[1][0]);
      INFO(p.str() << " at " << x.str());
      CHECK(std::abs(tr - l.rho.to_double()) <= 1e-7 * std::max(1.0, std::abs(tr)));
      CHECK(std::abs(det - l.delta.to_double()) <= 1e-7 * std::max(1.0, std::abs(det)));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("eigenvalue identities") {
  const auto l = linearize_at(Parameters(R(1, 6), R(1, 4), R(1, 3)), MetricPoint(R(4, 5), R(3, 5), 1));
  CHECK((l.lambda1 + l.lambda2).real() == doctest::Approx(l.rho.to_double()));
  CHECK((l.lambda1 * l.lambda2).real() == doctest::Approx(l.delta.to_double()));
  CHECK(std::abs(l.lambda1) <= std::abs(l.lambda2));
  CHECK(l.sigma == l.rho * l.rho - 4 * l.delta);
}

TEST_CASE("scale law") {
  const Parameters p(R(1, 6), R(1, 4), R(1, 3));
  const MetricPoint x(R(4, 5), R(3, 5), 1);
  const Scalar lambda = R(7, 2);
  const auto a = linearize_at(p, x);
  const auto b = linearize_at(p, x.scaled(lambda));
  CHECK(b.rho == a.rho / lambda);
  CHECK(b.delta == a.delta / (lambda * lambda));
  CHECK(classify(a).kind == classify(b).kind);
}

TEST_CASE("classify") {
  CHECK(classify(make(R(2, 3), R(1, 9))).kind == PointKind::UnstableNode);
  CHECK(classify(make(R(-26, 25), R(169, 625))).kind == PointKind::StableNode);
  CHECK(classify(make(0, 0)).kind == PointKind::Degenerate);
  CHECK(classify(make(1, -1)).kind == PointKind::Saddle);
  CHECK(classify(make(1, 1)).kind == PointKind::StrongFocus);
  CHECK(classify(make(0, 1)).kind == PointKind::WeakFocusOrCenter);
  CHECK(classify(make(Scalar(0.5), Scalar(1e-12))).near_degenerate);
  CHECK(classify(make(1, 0)).semi_hyperbolic_candidate);
}

TEST_CASE("sigma_expression") {
  SUBCASE("zero on the minimizing ray") {
    oracle::Draw draw(41);
    for (int k = 0; k < 200; ++k) {
      const std::array<double, 3> a{draw(0.01, 0.5), draw(0.01, 0.5), draw(0.01, 0.5)};
      const Parameters p{Scalar(a[0]), Scalar(a[1]), Scalar(a[2])};
      const double q = draw(0.2, 5);
      const MetricPoint x(std::array<double, 3>{q * std::sqrt(a[1] + a[2]), q * std::sqrt(a[0] + a[2]),
                                                q * std::sqrt(a[0] + a[1])});
      CHECK(std::abs(sigma_expression(p, x).to_double()) <= 1e-12);
    }
  }
  SUBCASE("nonnegative for A > 0") {
    oracle::Draw draw(43);
    int done = 0;
    while (done < 20000) {
      const std::array<double, 3> a{draw(-1, 1), draw(-1, 1), draw(-1, 1)};
      if (!(a[0] * a[1] + a[0] * a[2] + a[1] * a[2] > 0)) continue;
      ++done;
      const Parameters p{Scalar(a[0]), Scalar(a[1]), Scalar(a[2])};
      const MetricPoint x(std::array<double, 3>{draw(0.1, 10), draw(0.1, 10), draw(0.1, 10)});
      CHECK(sigma_expression(p, x).to_double() >= -1e-12);
    }
  }
  SUBCASE("equals rho^2 - 4 delta at equilibria") {
    for (const auto& p : {Parameters(R(1, 6), R(1, 6), R(1, 6)), Parameters(R(1, 6), R(1, 4), R(1, 3)),
                          Parameters(R(5, 36), R(1, 6), R(1, 4)), Parameters(R(1, 10), R(3, 20), R(1, 4))}) {
      for (const auto& r : solve_all(p).rays) {
        const auto l = linearize_at(p, r);
        const Scalar s = sigma_expression(p, r.rep);
        if (s.is_exact() && l.sigma.is_exact()) {
          CHECK(s == l.sigma);
        } else {
          CHECK(s.to_double() == doctest::Approx(l.sigma.to_double()).epsilon(1e-9));
        }
      }
    }
  }
  SUBCASE("G-form eigenvalues are 0, 2A and a1^2+a2^2+a3^2+A") {
    oracle::Draw draw(47);
    for (int k = 0; k < 50; ++k) {
      const Parameters p(R(draw.integer(-20, 20), 21), R(draw.integer(1, 20), 23), R(draw.integer(1, 20), 19));
      const auto g = g_form_matrix(p);
      const Scalar A = p.A();
      const Scalar e3 = p.a(0) * p.a(0) + p.a(1) * p.a(1) + p.a(2) * p.a(2) + A;
      const Scalar trace = g[0][0] + g[1][1] + g[2][2];
      const Scalar minors = g[0][0] * g[1][1] - g[0][1] * g[1][0] + g[0][0] * g[2][2] - g[0][2] * g[2][0] +
                            g[1][1] * g[2][2] - g[1][2] * g[2][1];
      const Scalar det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                         g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                         g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
      CHECK(trace == 2 * A + e3);
      CHECK(minors == 2 * A * e3);
      CHECK(det.is_zero());
    }
  }
}

TEST_CASE("sigma = 0 families") {
  SUBCASE("family parameters") {
    const Parameters e = sigma_zero_family(SigmaFamily::Equal, R(1, 4));
    CHECK(e.a(0) == R(1, 4));
    CHECK(e.a(2) == R(1, 4));
    const Parameters t = sigma_zero_family(SigmaFamily::TwoEqual, Scalar(0.7), 3);
    CHECK(t.a(0).to_double() == doctest::Approx(1.0204e-4).epsilon(1e-4));
    CHECK(t.a(1) == t.a(0));
    CHECK(t.a(2).to_double() == doctest::Approx(0.489898).epsilon(1e-6));
    CHECK(t.wallach_range());
    const Parameters near = sigma_zero_family(SigmaFamily::TwoEqual, Scalar(kS2 - 1e-6), 1);
    CHECK(near.a(1).to_double() < 1e-11);
    CHECK(sigma_zero_family(SigmaFamily::TwoEqual, Scalar(0.7), 1).a(0) == t.a(2));
    CHECK_THROWS(sigma_zero_family(SigmaFamily::TwoEqual, Scalar(0.3)));
    CHECK_THROWS(sigma_zero_family(SigmaFamily::Equal, R(3, 4)));
  }
  SUBCASE("points have sigma = 0") {
    const auto e = sigma_zero_points(SigmaFamily::Equal, R(1, 6));
    REQUIRE(e.size() == 1);
    CHECK(e[0].point[0] == Scalar(1));
    CHECK(linearize_at(e[0].params, e[0].point).sigma.is_zero());
    for (double s : {0.65, 0.7, 0.705}) {
      const auto pts = sigma_zero_points(SigmaFamily::TwoEqual, Scalar(s));
      CHECK(pts.size() == 3);
      for (const auto& z : pts) {
        const auto a = z.params.to_doubles();
        const auto x = z.point.to_doubles();
        // log V sums log(x_i)/a_i, so rounding scales with these terms.
        const double terms = std::abs(std::log(x[0]) / a[0]) + std::abs(std::log(x[1]) / a[1]) +
                             std::abs(std::log(x[2]) / a[2]) + 1.0 / a[0] + 1.0 / a[1] + 1.0 / a[2];
        CHECK(std::abs(log_volume(z.params, z.point)) <= 1e-14 * terms);
        CHECK(std::abs(linearize_at(z.params, z.point).sigma.to_double()) <= 1e-10);
        const double q = x[0] / std::sqrt(a[1] + a[2]);
        CHECK(x[1] == doctest::Approx(q * std::sqrt(a[0] + a[2])).epsilon(1e-12));
        CHECK(x[2] == doctest::Approx(q * std::sqrt(a[0] + a[1])).epsilon(1e-12));
      }
    }
  }
  SUBCASE("the closed-form q puts the k = 3 point on V = 1") {
    for (double s : {0.65, 0.69, 0.7}) {
      const double q = sigma_zero_q(s);
      const Parameters p = sigma_zero_family(SigmaFamily::TwoEqual, Scalar(s), 3);
      const MetricPoint x(std::array<double, 3>{2 * s * s * q, 2 * s * s * q, 1.0});
      const MetricPoint unit = normalize_unit_volume(p, x);
      CHECK(unit[0].to_double() / unit[2].to_double() == doctest::Approx(2 * s * s * q).epsilon(1e-12));
    }
  }
  SUBCASE("sigma and delta vanish together only at (1/4,1/4,1/4)") {
    for (int k = 1; k <= 20; ++k) {
      const auto z = sigma_zero_points(SigmaFamily::Equal, R(k, 40))[0];
      CHECK(linearize_at(z.params, z.point).delta.is_zero() == (k == 10));
    }
    for (int k = 0; k < 40; ++k) {
      const double s = kS1 + (kS2 - kS1) * (k + 0.5) / 40.0;
      for (const auto& z : sigma_zero_points(SigmaFamily::TwoEqual, Scalar(s))) {
        CHECK(std::abs(linearize_at(z.params, z.point).delta.to_double()) > 1e-12);
      }
    }
  }
}

TEST_CASE("finite-difference Jacobians") {
  const Parameters p(R(1, 6), R(1, 6), R(1, 6));
  const auto j = jacobian_2d_fd(p, 1, 1);
  CHECK(j[0][0] + j[1][1] == doctest::Approx(2.0 / 3.0).epsilon(1e-7));
  CHECK(j[0][0] * j[1][1] - j[0][1] * j[1][0] == doctest::Approx(1.0 / 9.0).epsilon(1e-7));

  const auto z = jacobian_2d_fd(Parameters(R(1, 4), R(1, 4), R(1, 4)), 1, 1);
  for (const auto& row : z) {
    for (double v : row) CHECK(std::abs(v) <= 1e-8);
  }

  const Parameters q(R(7, 15), R(7, 15), R(7, 15));
  const auto x = normalize_unit_volume(q, MetricPoint(14, 14, 1)).to_doubles();
  const auto k = jacobian_2d_fd(q, x[0], x[1]);
  CHECK(k[0][0] * k[1][1] - k[0][1] * k[1][0] < 0);

  SUBCASE("the 3D Jacobian is singular at equilibria") {
    const Parameters r(R(1, 6), R(1, 4), R(1, 3));
    for (const auto& ray : solve_all(r).rays) {
      const auto ev = eigenvalues(jacobian_3d_fd(r, ray.rep.to_doubles()));
      double smallest = 1e300;
      for (const auto& e : ev) smallest = std::min(smallest, std::abs(e));
      CHECK(smallest <= 1e-6);
    }
  }
}
