#include "wallach/surfaces.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "wallach/equilibria.hpp"
#include "wallach/linearize.hpp"

namespace wallach {

namespace {

/// Value and gradient with respect to (a1, a2, a3).
template <class T>
struct Dual3 {
  T v;
  std::array<T, 3> d{};

  Dual3() : v(0) {}
  Dual3(int c) : v(c) {}  // NOLINT(google-explicit-constructor)
  Dual3(T value, std::array<T, 3> grad) : v(std::move(value)), d(std::move(grad)) {}

  friend Dual3 operator+(const Dual3& l, const Dual3& r) {
    return {l.v + r.v, {l.d[0] + r.d[0], l.d[1] + r.d[1], l.d[2] + r.d[2]}};
  }
  friend Dual3 operator-(const Dual3& l, const Dual3& r) {
    return {l.v - r.v, {l.d[0] - r.d[0], l.d[1] - r.d[1], l.d[2] - r.d[2]}};
  }
  friend Dual3 operator*(const Dual3& l, const Dual3& r) {
    return {l.v * r.v, {l.d[0] * r.v + l.v * r.d[0], l.d[1] * r.v + l.v * r.d[1], l.d[2] * r.v + l.v * r.d[2]}};
  }
};

template <class T, class F>
std::array<T, 3> gradient(const std::array<T, 3>& a, F&& f) {
  std::array<Dual3<T>, 3> x;
  for (std::size_t i = 0; i < 3; ++i) {
    x[i].v = a[i];
    x[i].d = {T(0), T(0), T(0)};
    x[i].d[i] = T(1);
  }
  return f(x).d;
}

bool in_open_cube(const std::array<Scalar, 3>& a) {
  const Scalar half = Scalar::ratio(1, 2);
  return std::all_of(a.begin(), a.end(), [&](const Scalar& v) { return v.sign() > 0 && v < half; });
}

Region census_region(const Parameters& p) {
  const Census census = solve_all(p);
  int saddles = 0;
  int stable = 0;
  int unstable = 0;
  for (const auto& ray : census.rays) {
    switch (classify(linearize_at(p, ray)).kind) {
      case PointKind::Saddle: ++saddles; break;
      case PointKind::StableNode: ++stable; break;
      case PointKind::UnstableNode: ++unstable; break;
      default: return Region::Outside;
    }
  }
  const auto n = census.rays.size();
  if (n == 2 && saddles == 2) return Region::O3;
  if (n == 4 && saddles == 3 && unstable == 1) return Region::O1;
  if (n == 4 && saddles == 3 && stable == 1) return Region::O2;
  return Region::Outside;
}

std::string cell(const Scalar& v) { return v.str(); }

}  // namespace

Scalar q_eval(const std::array<Scalar, 3>& a) { return formula::q_of(a); }
Scalar q_eval(const Parameters& p) { return q_eval(p.a()); }
double q_eval(const std::array<double, 3>& a) { return formula::q_of(a); }

std::array<Scalar, 3> grad_q(const std::array<Scalar, 3>& a) {
  return gradient(a, [](const auto& x) { return formula::q_of(x); });
}
std::array<Scalar, 3> grad_q(const Parameters& p) { return grad_q(p.a()); }

Scalar q1_eval(const std::array<Scalar, 3>& a) { return formula::q1_of(a); }
Scalar q1_eval(const Parameters& p) { return q1_eval(p.a()); }

std::array<Scalar, 3> grad_q1(const std::array<Scalar, 3>& a) {
  return gradient(a, [](const auto& x) { return formula::q1_of(x); });
}

EdgeCurvePoint edge_curve(const Scalar& t, int i) {
  if (i < 1 || i > 3) throw DomainError("edge curve index must be 1, 2 or 3");
  const Scalar den = 8 * t * t - 1;
  if (den.is_zero() || std::abs(den.to_double()) < 1e-15) throw DomainError("edge curve has a pole at 8t^2 = 1");
  EdgeCurvePoint e{t, {t, t, t}};
  e.a[static_cast<std::size_t>(i - 1)] = -(16 * t * t * t - 4 * t + 1) / (2 * den);
  return e;
}

Scalar omega_slice_a1_half(const Scalar& a2, const Scalar& a3) {
  const Scalar s1 = a2 + a3;
  const Scalar s2 = a2 * a3;
  const Scalar w = 4 * s2 + 1;
  const Scalar v = 4 * s2 - 1;
  return 4 * s2 * w * w - 4 * v * w * w * s1 - 13 * w * w * s1 * s1 + 4 * v * s1 * s1 * s1 +
         44 * s1 * s1 * s1 * s1;
}

bool on_omega(const std::array<Scalar, 3>& a, const Scalar& q) {
  if (q.is_exact()) return q.is_zero();
  double norm = 0.0;
  for (const auto& v : a) norm += v.to_double() * v.to_double();
  return std::abs(q.to_double()) <= 1e-10 * std::pow(1.0 + std::sqrt(norm), 12);
}

Region component_classify(const Parameters& p) {
  if (on_omega(p.a(), q_eval(p))) return Region::OnOmega;
  if (!in_open_cube(p.a())) return Region::Outside;
  return census_region(p);
}

SurfaceSample sample_at(const std::array<Scalar, 3>& a) {
  SurfaceSample s{a, q_eval(a), q1_eval(a), grad_q(a), Region::Outside};
  if (on_omega(a, s.Q)) {
    s.region = Region::OnOmega;
  } else if (in_open_cube(a)) {
    s.region = census_region(Parameters(a[0], a[1], a[2]));
  }
  return s;
}

std::vector<SurfaceSample> scan_grid(const Scalar& lo, const Scalar& hi, int n, const ScanOptions& options) {
  if (n < 2 && options.spacing == GridSpacing::Inclusive) throw DomainError("scan_grid needs n >= 2");
  if (n < 1) throw DomainError("scan_grid needs n >= 1");
  std::vector<Scalar> axis;
  for (int i = 0; i < n; ++i) {
    Scalar v = options.spacing == GridSpacing::Inclusive ? lo + (hi - lo) * Scalar::ratio(i, n - 1)
                                                         : lo + (hi - lo) * Scalar::ratio(2 * i + 1, 2 * n);
    axis.push_back(options.exact ? v : to_float(v));
  }
  const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::vector<SurfaceSample> out(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t un = static_cast<std::size_t>(n);
      out[k] = sample_at({axis[k / (un * un)], axis[(k / un) % un], axis[k % un]});
    }
  };
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

const char* to_string(Region region) {
  switch (region) {
    case Region::O1: return "O1";
    case Region::O2: return "O2";
    case Region::O3: return "O3";
    case Region::OnOmega: return "OnOmega";
    case Region::Outside: return "Outside";
  }
  return "?";
}

void to_json(nlohmann::json& j, const SurfaceSample& s) {
  j = {{"a", nlohmann::json::array({s.a[0], s.a[1], s.a[2]})},
       {"Q", s.Q},
       {"Q1", s.Q1},
       {"gradQ", nlohmann::json::array({s.gradQ[0], s.gradQ[1], s.gradQ[2]})},
       {"region", to_string(s.region)}};
}

void write_csv(std::ostream& out, const std::vector<SurfaceSample>& samples) {
  out << "a1,a2,a3,Q,Q1,gQ1,gQ2,gQ3,region\n";
  for (const auto& s : samples) {
    out << cell(s.a[0]) << ',' << cell(s.a[1]) << ',' << cell(s.a[2]) << ',' << cell(s.Q) << ',' << cell(s.Q1)
        << ',' << cell(s.gradQ[0]) << ',' << cell(s.gradQ[1]) << ',' << cell(s.gradQ[2]) << ','
        << to_string(s.region) << '\n';
  }
}

}  // namespace wallach
