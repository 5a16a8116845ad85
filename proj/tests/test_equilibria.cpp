#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracle.hpp"
#include "wallach/equilibria.hpp"

using namespace wallach;

namespace {

Scalar R(long n, long d) { return Scalar::ratio(n, d); }

bool has_rep(const std::vector<EquilibriumRay>& rays, const Scalar& x1, const Scalar& x2) {
  return std::any_of(rays.begin(), rays.end(), [&](const EquilibriumRay& r) { return r.rep[0] == x1 && r.rep[1] == x2; });
}

bool near_rep(const std::vector<EquilibriumRay>& rays, double x1, double x2, double tol) {
  return std::any_of(rays.begin(), rays.end(), [&](const EquilibriumRay& r) {
    const auto x = r.rep.to_doubles();
    return std::abs(x[0] - x1) <= tol * std::max(1.0, x1) && std::abs(x[1] - x2) <= tol * std::max(1.0, x2);
  });
}

void check_exact_equilibrium(const Parameters& p, const MetricPoint& x) {
  REQUIRE(p.exact());
  REQUIRE(x.exact());
  const auto e = oracle::residual({p.a(0).as_rational(), p.a(1).as_rational(), p.a(2).as_rational()},
                                  {x[0].as_rational(), x[1].as_rational(), x[2].as_rational()});
  CHECK(e[0] == 0);
  CHECK(e[1] == 0);
}

/// Newton census and closed-form rays describe the same set of x3 = 1 points.
void check_same_set(const std::vector<EquilibriumRay>& rays, const std::vector<std::array<double, 2>>& numeric,
                    const Parameters& p) {
  INFO("parameters " << p.str());
  CHECK(rays.size() == numeric.size());
  for (const auto& n : numeric) CHECK(near_rep(rays, n[0], n[1], 1e-5));
}

}  // namespace

TEST_CASE("residual") {
  CHECK(residual(Parameters(R(1, 6), R(1, 6), R(1, 6)), MetricPoint(1, 2, 1))[0].is_zero());
  CHECK(residual(Parameters(R(1, 6), R(1, 6), R(1, 6)), MetricPoint(1, 2, 1))[1].is_zero());
  const auto e = residual(Parameters(R(1, 8), R(1, 8), R(1, 4)), MetricPoint(R(3, 4), R(3, 4), R(1, 2)));
  CHECK(e[0].is_zero());
  CHECK(e[1].is_zero());
  const auto u = residual(Parameters(R(1, 4), R(1, 4), R(1, 4)), MetricPoint(1, 1, 1));
  CHECK(u[0].is_zero());
  CHECK(u[1].is_zero());
}

TEST_CASE("residual is degree-2 homogeneous and matches the oracle") {
  oracle::Draw draw(21);
  for (int k = 0; k < 100; ++k) {
    const Parameters p(R(draw.integer(1, 20), 40), R(draw.integer(1, 20), 40), R(draw.integer(1, 20), 40));
    const MetricPoint x(R(draw.integer(1, 40), 9), R(draw.integer(1, 40), 7), R(draw.integer(1, 40), 5));
    const Scalar lambda = R(draw.integer(1, 30), draw.integer(1, 30));
    const auto e = residual(p, x);
    const auto s = residual(p, x.scaled(lambda));
    CHECK(s[0] == lambda * lambda * e[0]);
    CHECK(s[1] == lambda * lambda * e[1]);
    const auto o = oracle::residual({p.a(0).as_rational(), p.a(1).as_rational(), p.a(2).as_rational()},
                                    {x[0].as_rational(), x[1].as_rational(), x[2].as_rational()});
    CHECK(e[0].as_rational() == o[0]);
    CHECK(e[1].as_rational() == o[1]);
  }
}

TEST_CASE("solve_two_equal") {
  SUBCASE("b = c = a gives four rays") {
    for (long n : {1L, 2L, 3L, 5L, 6L, 7L}) {
      const Scalar a = R(n, 16);
      const auto r = solve_two_equal(a, a);
      CHECK(r.rays.size() == 4);
      const Scalar m = (1 - 2 * a) / (2 * a);
      CHECK(has_rep(r.rays, 1, 1));
      CHECK(has_rep(r.rays, m, 1));
      CHECK(has_rep(r.rays, 1, m));
      CHECK(has_rep(r.rays, 1 / m, 1 / m));
      for (const auto& ray : r.rays) check_exact_equilibrium(Parameters(a, a, a), ray.rep);
    }
  }
  SUBCASE("b = c = 1/4 gives only (1,1,1)") {
    const auto r = solve_two_equal(R(1, 4), R(1, 4));
    REQUIRE(r.rays.size() == 1);
    CHECK(r.rays[0].rep[0] == Scalar(1));
    CHECK(r.rays[0].rep[1] == Scalar(1));
    CHECK(r.rays[0].multiplicity == 4);
  }
  SUBCASE("b = c = 7/15") {
    const auto r = solve_two_equal(R(7, 15), R(7, 15));
    CHECK(r.rays.size() == 4);
    CHECK(has_rep(r.rays, R(1, 14), 1));
    CHECK(has_rep(r.rays, 1, R(1, 14)));
    CHECK(has_rep(r.rays, 14, 14));
    CHECK(has_rep(r.rays, 1, 1));
  }
  SUBCASE("discriminants") {
    const Scalar b = R(1, 5);
    const Scalar c = R(1, 3);
    const auto r = solve_two_equal(b, c);
    REQUIRE(r.discriminants.D1);
    REQUIRE(r.discriminants.T);
    CHECK(*r.discriminants.D1 == 1 - 4 * (1 - 2 * c) * (b + c));
    CHECK(*r.discriminants.T == 1 - 4 * b - 2 * c + 16 * b * b * (b + c));
    for (const auto& ray : r.rays) {
      if (ray.rep.exact()) check_exact_equilibrium(Parameters(b, b, c), ray.rep);
      CHECK(residual_norm(Parameters(b, b, c), ray.rep) <= 1e-12);
    }
  }
  SUBCASE("c = 1/2 has a single diagonal ray") {
    const auto r = solve_two_equal(R(1, 5), R(1, 2));
    const auto diagonal = std::count_if(r.rays.begin(), r.rays.end(),
                                        [](const EquilibriumRay& x) { return x.family == FamilyTag::TwoEqualDiagonal; });
    CHECK(diagonal == 1);
  }
}

TEST_CASE("solve_sum_half") {
  const Parameters p(R(1, 10), R(3, 20), R(1, 4));
  const auto rays = solve_sum_half(p);
  CHECK(rays.size() == 4);
  CHECK(has_rep(rays, R(8, 5), R(7, 5)));
  for (const auto& r : rays) {
    CHECK(r.family == FamilyTag::SumHalf);
    CHECK(residual_norm(p, r.rep) <= 1e-12);
  }
  const auto fam2 = std::find_if(rays.begin(), rays.end(), [](const EquilibriumRay& r) { return r.family_index == 2; });
  REQUIRE(fam2 != rays.end());
  CHECK(fam2->native_convention == Convention::FamilyQ1);
  CHECK(fam2->native[0] == R(4, 5));
  CHECK(fam2->native[1] == R(7, 10));
  CHECK(fam2->native[2] == R(3, 2));
  const auto fam1 = std::find_if(rays.begin(), rays.end(), [](const EquilibriumRay& r) { return r.family_index == 1; });
  REQUIRE(fam1 != rays.end());
  CHECK(fam1->native[2] == R(1, 2));
  for (const auto& r : rays) check_exact_equilibrium(p, r.native);
  CHECK_THROWS(solve_sum_half(Parameters(R(1, 10), R(1, 10), R(3, 10))));
}

TEST_CASE("quartic") {
  const Parameters p(R(1, 6), R(1, 4), R(1, 3));
  const auto c = quartic_coefficients(p);
  const Scalar a1 = p.a(0);
  const Scalar a2 = p.a(1);
  const Scalar a3 = p.a(2);
  CHECK(c[0] == (a2 + a3) * (a2 + a3) * (2 * a1 - 1) * (2 * a1 + 1));
  CHECK(c[4] == (2 * a3 - 1) * (2 * a3 + 1) * (a1 + a2) * (a1 + a2));
  CHECK(c[4].sign() < 0);
  CHECK_FALSE(quartic_discriminant(p).is_zero());

  const Parameters so20(R(5, 36), R(1, 6), R(1, 4));
  CHECK(quartic_discriminant(so20).is_zero());

  SUBCASE("every (1, t, s) from a quartic root is an equilibrium") {
    const auto g = solve_general(p);
    CHECK(g.rays.size() == 2);
    CHECK(has_rep(g.rays, R(4, 5), R(3, 5)));
    CHECK(near_rep(g.rays, 2.284185494, 2.372799295, 1e-9));
    for (const auto& r : g.rays) {
      CHECK(r.native_convention == Convention::OneTS);
      CHECK(r.native[0] == Scalar(1));
      CHECK(residual_norm(p, r.rep) <= 1e-10);
      const Scalar s = r.native[2];
      CHECK(std::abs(quartic_polynomial(p)(s).to_double()) <= 1e-10);
    }
  }
  SUBCASE("SO(20) case has three rays") {
    const auto g = solve_general(so20);
    CHECK(g.rays.size() == 3);
  }
}

TEST_CASE("solve_all") {
  CHECK(solve_all(Parameters(R(1, 6), R(1, 6), R(1, 6))).distinct() == 4);
  CHECK(solve_all(Parameters(R(1, 6), R(1, 4), R(1, 3))).distinct() == 2);
  const Census so20 = solve_all(Parameters(R(5, 36), R(1, 6), R(1, 4)));
  CHECK(so20.distinct() == 3);
  CHECK(std::count_if(so20.rays.begin(), so20.rays.end(), [](const EquilibriumRay& r) { return r.multiplicity == 2; }) ==
        1);

  SUBCASE("count between 1 and 4 and positive in the open cube") {
    oracle::Draw draw(23);
    for (int k = 0; k < 300; ++k) {
      const Parameters p{Scalar(draw(0.02, 0.49)), Scalar(draw(0.02, 0.49)), Scalar(draw(0.02, 0.49))};
      const Census c = solve_all(p);
      INFO(p.str());
      CHECK(c.distinct() >= 1);
      CHECK(c.distinct() <= 4);
      for (const auto& r : c.rays) {
        for (int i = 0; i < 3; ++i) CHECK(r.rep[i].sign() > 0);
        CHECK(residual_norm(p, r.rep) <= 1e-10);
      }
      for (std::size_t i = 1; i < c.rays.size(); ++i) {
        const auto prev = c.rays[i - 1].rep.to_doubles();
        const auto cur = c.rays[i].rep.to_doubles();
        CHECK(std::make_pair(prev[0], prev[1]) < std::make_pair(cur[0], cur[1]));
      }
    }
  }
}

TEST_CASE("closed forms agree with the Newton census") {
  oracle::Draw draw(29);
  SUBCASE("two equal") {
    for (int k = 0; k < 1000; ++k) {
      const Scalar b(draw(0.05, 0.45));
      const Scalar c(draw(0.05, 0.45));
      const Parameters p(b, b, c);
      check_same_set(solve_two_equal(b, c).rays, newton_census(p), p);
    }
  }
  SUBCASE("sum one half") {
    int done = 0;
    while (done < 1000) {
      const double a1 = draw(0.05, 0.4);
      const double a2 = draw(0.05, 0.4);
      const double a3 = 0.5 - a1 - a2;
      if (a3 < 0.05 || std::abs(a1 - a2) < 1e-3 || std::abs(a1 - a3) < 1e-3 || std::abs(a2 - a3) < 1e-3) continue;
      ++done;
      // Exact sum 1/2 through rationals with denominator 2^20.
      const long n1 = std::lround(a1 * (1 << 20));
      const long n2 = std::lround(a2 * (1 << 20));
      const Parameters p(R(n1, 1 << 20), R(n2, 1 << 20), R((1 << 19) - n1 - n2, 1 << 20));
      check_same_set(solve_sum_half(p), newton_census(p.to_float()), p);
    }
  }
  SUBCASE("general") {
    for (int k = 0; k < 1000; ++k) {
      const Parameters p{Scalar(draw(0.05, 0.45)), Scalar(draw(0.05, 0.45)), Scalar(draw(0.05, 0.45))};
      const auto g = solve_general(p);
      const auto n = newton_census(p);
      // Close to a double root the quartic reports one ray where Newton may see two.
      if (std::any_of(g.rays.begin(), g.rays.end(), [](const EquilibriumRay& r) { return r.ill_conditioned; })) continue;
      check_same_set(g.rays, n, p);
    }
  }
}

TEST_CASE("normalize_unit_volume") {
  const Parameters p(R(1, 6), R(1, 6), R(1, 6));
  const MetricPoint one = normalize_unit_volume(p, MetricPoint(1, 1, 1));
  CHECK(one[0] == Scalar(1));
  CHECK(one.exact());
  const MetricPoint x = normalize_unit_volume(p, MetricPoint(2, 1, 1));
  CHECK(x[0].to_double() == doctest::Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-14));
  CHECK(x[1].to_double() == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-14));
  CHECK(x[2].to_double() == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-14));
  CHECK(std::abs(log_volume(p, x)) <= 1e-13);
}

TEST_CASE("census is constant on the components") {
  oracle::Draw draw(31);
  const std::vector<std::pair<Parameters, int>> reps{{Parameters(R(1, 6), R(1, 6), R(1, 6)), 4},
                                                     {Parameters(R(7, 15), R(7, 15), R(7, 15)), 4},
                                                     {Parameters(R(1, 6), R(1, 4), R(1, 3)), 2}};
  for (const auto& [p, count] : reps) {
    for (int k = 0; k < 50; ++k) {
      const auto a = p.to_doubles();
      const Parameters q{Scalar(a[0] + draw(-0.01, 0.01)), Scalar(a[1] + draw(-0.01, 0.01)),
                         Scalar(a[2] + draw(-0.01, 0.01))};
      CHECK(solve_all(q).distinct() == count);
    }
  }
}
