#include "wallach/parameters.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace wallach {

namespace {

const Scalar kHalf = Scalar::ratio(1, 2);

bool in_wallach_range(const Scalar& v) { return v.sign() > 0 && v <= kHalf; }
bool in_open_interval(const Scalar& v) { return v.sign() > 0 && v < kHalf; }

}  // namespace

Parameters::Parameters(Scalar a1, Scalar a2, Scalar a3)
    : a_{std::move(a1), std::move(a2), std::move(a3)}, s_(elementary_symmetric(a_)) {
  if (s_[1].is_zero()) {
    throw DomainError("a1a2 + a1a3 + a2a3 = 0: the flow is undefined for " + str());
  }
  reduced_ok_ = !s_[2].is_zero();
  wallach_range_ = in_wallach_range(a_[0]) && in_wallach_range(a_[1]) && in_wallach_range(a_[2]);
  interior_ = in_open_interval(a_[0]) && in_open_interval(a_[1]) && in_open_interval(a_[2]);
}

Parameters Parameters::parse(std::string_view text) {
  std::vector<Scalar> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    values.push_back(Scalar::parse(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (values.size() != 3) {
    throw std::invalid_argument("expected three comma-separated parameters, got '" + std::string(text) + "'");
  }
  return Parameters(values[0], values[1], values[2]);
}

bool Parameters::exact() const { return a_[0].is_exact() && a_[1].is_exact() && a_[2].is_exact(); }

std::array<double, 3> Parameters::to_doubles() const {
  return {a_[0].to_double(), a_[1].to_double(), a_[2].to_double()};
}

Parameters Parameters::to_float() const {
  return Parameters(wallach::to_float(a_[0]), wallach::to_float(a_[1]), wallach::to_float(a_[2]));
}

Parameters Parameters::permuted(const std::array<int, 3>& perm) const {
  return Parameters(a(perm[0]), a(perm[1]), a(perm[2]));
}

std::string Parameters::str() const {
  return "(" + a_[0].str() + ", " + a_[1].str() + ", " + a_[2].str() + ")";
}

SymmetricFunctions symmetric_functions(const Parameters& p) { return {p.s1(), p.s2(), p.s3()}; }

Parameters params_from_dims(const LieData& lie) {
  if (lie.d1 <= 0 || lie.d2 <= 0 || lie.d3 <= 0) throw DomainError("module dimensions must be positive");
  if (lie.A.sign() <= 0) throw DomainError("A must be positive");
  for (const long d : {lie.d1, lie.d2, lie.d3}) {
    if (Scalar(d) < 2 * lie.A) throw DomainError("d_i >= 2A violated for d = " + std::to_string(d));
  }
  return Parameters(lie.A / Scalar(lie.d1), lie.A / Scalar(lie.d2), lie.A / Scalar(lie.d3));
}

DomainReport validate(const std::array<Scalar, 3>& a) {
  const auto s = elementary_symmetric(a);
  DomainReport r;
  r.s2_nonzero = !s[1].is_zero();
  r.reduced_ok = r.s2_nonzero && !s[2].is_zero();
  r.wallach_range = in_wallach_range(a[0]) && in_wallach_range(a[1]) && in_wallach_range(a[2]);
  r.interior = in_open_interval(a[0]) && in_open_interval(a[1]) && in_open_interval(a[2]);
  if (!r.s2_nonzero) {
    r.note = "s2 = 0: the three-dimensional system is undefined";
  } else if (!r.reduced_ok) {
    r.note = "a1a2a3 = 0: the volume-reduced planar system is undefined";
  } else if (r.interior) {
    r.note = "a_i in (0,1/2): no equilibrium has a zero component";
  } else if (r.wallach_range) {
    r.note = "boundary parameters (some a_i = 1/2)";
  } else {
    r.note = "outside the Wallach range (0,1/2]^3";
  }
  return r;
}

DomainReport validate(const Parameters& p) { return validate(p.a()); }

void to_json(nlohmann::json& j, const Parameters& p) {
  j = nlohmann::json{{"a", {p.a(0), p.a(1), p.a(2)}}, {"s", {p.s1(), p.s2(), p.s3()}}};
}

void to_json(nlohmann::json& j, const DomainReport& r) {
  j = nlohmann::json{{"s2_nonzero", r.s2_nonzero},
                     {"reduced_ok", r.reduced_ok},
                     {"wallach_range", r.wallach_range},
                     {"interior", r.interior},
                     {"note", r.note}};
}

}  // namespace wallach
