#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracle.hpp"
#include "wallach/equilibria.hpp"
#include "wallach/integrate.hpp"
#include "wallach/linearize.hpp"

using namespace wallach;

namespace {

Scalar R(long n, long d) { return Scalar::ratio(n, d); }

int node_index(const Parameters& p, const std::vector<std::array<double, 3>>& eqs) {
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const auto kind = classify(linearize_at(p, MetricPoint(eqs[i]))).kind;
    if (kind == PointKind::StableNode || kind == PointKind::UnstableNode) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

TEST_CASE("equilibrium start is constant") {
  const Parameters p(R(1, 6), R(1, 6), R(1, 6));
  const auto t = integrate_flow(p, {1.0, 1.0});
  CHECK(t.status == TrajectoryStatus::ConvergedTo);
  REQUIRE(t.equilibrium >= 0);
  const auto eqs = unit_volume_equilibria(p);
  CHECK(eqs[static_cast<std::size_t>(t.equilibrium)][0] == doctest::Approx(1.0));
  for (const auto& s : t.samples) {
    CHECK(s.x1 == 1.0);
    CHECK(s.x2 == 1.0);
  }
  const auto lifted = integrate_flow_3d(p, {2.0, 1.0, 1.0});
  CHECK(lifted.status == TrajectoryStatus::ConvergedTo);
  CHECK(lifted.samples.front().V == doctest::Approx(64.0));
}

TEST_CASE("reduced flow keeps V = 1") {
  const Parameters p(R(1, 6), R(1, 6), R(1, 6));
  const auto t = integrate_flow(p, {1.05, 0.95});
  CHECK((t.status == TrajectoryStatus::ConvergedTo || t.status == TrajectoryStatus::LeftDomain));
  CHECK(t.max_volume_drift <= 1e-8);
  for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].t > t.samples[i - 1].t);
}

TEST_CASE("stable node attracts nearby starts") {
  const Parameters p(R(7, 15), R(7, 15), R(7, 15));
  IntegrateOptions opts;
  opts.t_max = 200;
  const auto t = integrate_flow(p, {1.02, 0.97}, opts);
  REQUIRE(t.status == TrajectoryStatus::ConvergedTo);
  const auto eqs = unit_volume_equilibria(p);
  const auto& e = eqs[static_cast<std::size_t>(t.equilibrium)];
  CHECK(e[0] == doctest::Approx(1.0));
  CHECK(e[1] == doctest::Approx(1.0));
}

TEST_CASE("3D volume drift") {
  oracle::Draw draw(79);
  const Parameters p(R(1, 6), R(1, 4), R(1, 3));
  IntegrateOptions opts;
  opts.t_max = 50;
  for (int k = 0; k < 5; ++k) {
    const std::array<double, 3> x0{draw(0.5, 2), draw(0.5, 2), draw(0.5, 2)};
    const auto t = integrate_flow_3d(p, x0, opts);
    CHECK(t.max_volume_drift <= 1e-7);
    for (const auto& s : t.samples) {
      const double lv = static_cast<double>(oracle::log_volume({1.0L / 6, 0.25L, 1.0L / 3}, {s.x1, s.x2, s.x3}));
      CHECK(std::abs(std::log(s.V) - lv) <= 1e-9 * std::max(1.0, std::abs(lv)));
    }
  }
}

TEST_CASE("tighter tolerance reduces drift in linear coordinates") {
  const Parameters p(R(1, 6), R(1, 4), R(1, 3));
  IntegrateOptions loose;
  loose.t_max = 5;
  loose.log_coordinates = false;
  loose.rel_tol = 1e-6;
  IntegrateOptions tight = loose;
  tight.rel_tol = 1e-8;
  const auto a = integrate_flow_3d(p, {1.3, 0.8, 1.1}, loose);
  const auto b = integrate_flow_3d(p, {1.3, 0.8, 1.1}, tight);
  CHECK(a.max_volume_drift > 0);
  CHECK(b.max_volume_drift * 10 <= a.max_volume_drift);
}

TEST_CASE("end point agrees with a tighter reference") {
  const Parameters p(R(1, 6), R(1, 4), R(1, 3));
  IntegrateOptions ref;
  ref.t_max = 2;
  ref.rel_tol = 1e-12;
  const auto r = integrate_flow(p, {1.3, 0.8}, ref);
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    IntegrateOptions o = ref;
    o.rel_tol = tol;
    const auto t = integrate_flow(p, {1.3, 0.8}, o);
    const double err = std::abs(t.samples.back().x1 - r.samples.back().x1) + std::abs(t.samples.back().x2 - r.samples.back().x2);
    CHECK(err <= 100 * tol);
  }
}

TEST_CASE("O1 starts never settle on a saddle") {
  const Parameters p(R(1, 6), R(1, 6), R(1, 6));
  const auto eqs = unit_volume_equilibria(p);
  const int node = node_index(p, eqs);
  REQUIRE(node >= 0);
  oracle::Draw draw(83);
  IntegrateOptions opts;
  opts.t_max = 60;
  opts.rel_tol = 1e-8;
  opts.equilibria = eqs;
  for (int k = 0; k < 100; ++k) {
    const auto t = integrate_flow(p, {std::exp(draw(-1, 1)), std::exp(draw(-1, 1))}, opts);
    const auto limit = classify_limit(p, t, eqs);
    if (limit.status == TrajectoryStatus::ConvergedTo) CHECK(limit.equilibrium == node);
  }
}

TEST_CASE("classify_limit") {
  const Parameters p(R(1, 6), R(1, 6), R(1, 6));
  const auto eqs = unit_volume_equilibria(p);
  const auto c = integrate_flow(p, {1.0, 1.0});
  const auto l = classify_limit(p, c, eqs);
  CHECK(l.status == TrajectoryStatus::ConvergedTo);
  CHECK(l.distance <= 1e-12);

  IntegrateOptions opts;
  opts.t_max = 100;
  const auto out = integrate_flow(Parameters(R(1, 6), R(1, 4), R(1, 3)), {1.0, 1.2}, opts);
  const auto e = classify_limit(Parameters(R(1, 6), R(1, 4), R(1, 3)), out,
                                unit_volume_equilibria(Parameters(R(1, 6), R(1, 4), R(1, 3))));
  CHECK(e.status == TrajectoryStatus::LeftDomain);
  CHECK_FALSE(e.exit_face.empty());
}

TEST_CASE("options are validated") {
  const Parameters p(R(1, 6), R(1, 6), R(1, 6));
  IntegrateOptions o;
  o.rel_tol = 1e-2;
  CHECK_THROWS_AS(integrate_flow(p, {1.0, 1.1}, o), DomainError);
  o.rel_tol = 1e-13;
  CHECK_THROWS_AS(integrate_flow(p, {1.0, 1.1}, o), DomainError);
  CHECK_THROWS_AS(integrate_flow(p, {-1.0, 1.1}), DomainError);
  CHECK_THROWS_AS(integrate_flow(Parameters(1, 1, 0), {1.0, 1.1}), DomainError);
}

TEST_CASE("trajectory output") {
  const auto t = integrate_flow(Parameters(R(1, 6), R(1, 6), R(1, 6)), {1.0, 1.0});
  std::ostringstream out;
  write_csv(out, t);
  CHECK(out.str() == "t,x1,x2,x3,V\n0,1,1,1,1\n");
  const nlohmann::json j = t;
  CHECK(j["status"] == "converged");
}
