#include "wallach/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wallach {

namespace {

void trim(std::vector<Scalar>& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Polynomial linear_factor(const Scalar& root) { return Polynomial({-root, Scalar(1)}); }

// Newton on p in long double; returns the input unchanged when it does not help.
double polish(const Polynomial& p, double guess) {
  const Polynomial dp = p.derivative();
  long double x = guess;
  long double best = x;
  long double best_res = std::fabs(p.eval(x));
  for (int it = 0; it < 30 && best_res > 0; ++it) {
    const long double d = dp.eval(x);
    if (d == 0) break;
    x -= p.eval(x) / d;
    const long double res = std::fabs(p.eval(x));
    if (res < best_res) {
      best = x;
      best_res = res;
    } else if (it > 3) {
      break;
    }
  }
  return static_cast<double>(best);
}

std::vector<RealRoot> real_roots_exact(const Polynomial& p) {
  std::vector<RealRoot> out;
  for (const auto& [factor, multiplicity] : square_free_decomposition(p)) {
    Polynomial f = factor;
    while (f.degree() >= 1) {
      const int n_real = count_real_roots(f);
      if (n_real == 0) break;
      if (f.degree() == 1) {
        out.push_back({-f.coeff(0) / f.coeff(1), multiplicity, false});
        break;
      }
      auto z = companion_roots(f);
      std::sort(z.begin(), z.end(), [](const auto& l, const auto& r) { return std::abs(l.imag()) < std::abs(r.imag()); });
      z.resize(static_cast<std::size_t>(n_real));

      bool deflated = false;
      for (const auto& candidate : z) {
        if (auto q = recover_rational_root(f, candidate.real())) {
          out.push_back({*q, multiplicity, false});
          f = divmod(f, linear_factor(*q)).quotient;
          deflated = true;
          break;
        }
      }
      if (deflated) continue;
      for (const auto& candidate : z) {
        out.push_back({Scalar(polish(f, candidate.real())), multiplicity, false});
      }
      break;
    }
  }
  return out;
}

std::vector<RealRoot> real_roots_float(const Polynomial& p, double cluster_tol) {
  std::vector<double> candidates;
  for (const auto& z : companion_roots(p)) {
    if (std::abs(z.imag()) <= cluster_tol * std::max(1.0, std::abs(z))) candidates.push_back(z.real());
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<RealRoot> out;
  for (std::size_t i = 0; i < candidates.size();) {
    std::size_t j = i + 1;
    while (j < candidates.size() &&
           candidates[j] - candidates[j - 1] <= cluster_tol * std::max(1.0, std::abs(candidates[j]))) {
      ++j;
    }
    const int m = static_cast<int>(j - i);
    double mean = 0.0;
    for (std::size_t k = i; k < j; ++k) mean += candidates[k];
    mean /= m;
    Polynomial target = p;
    for (int d = 1; d < m; ++d) target = target.derivative();
    out.push_back({Scalar(polish(target, mean)), m, m > 1});
    i = j;
  }
  return out;
}

}  // namespace

Polynomial::Polynomial(std::vector<Scalar> ascending) : c_(std::move(ascending)) { trim(c_); }

Polynomial Polynomial::from_descending(std::vector<Scalar> descending) {
  std::reverse(descending.begin(), descending.end());
  return Polynomial(std::move(descending));
}

bool Polynomial::exact() const {
  return std::all_of(c_.begin(), c_.end(), [](const Scalar& v) { return v.is_exact(); });
}

Scalar Polynomial::operator()(const Scalar& t) const {
  Scalar acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

long double Polynomial::eval(long double t) const {
  long double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + static_cast<long double>(it->to_double());
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<Scalar> d;
  for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * Scalar(static_cast<long>(k)));
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  std::vector<Scalar> m = c_;
  const Scalar lc = leading();
  for (auto& v : m) v /= lc;
  return Polynomial(std::move(m));
}

Polynomial operator+(const Polynomial& lhs, const Polynomial& rhs) {
  std::vector<Scalar> c(std::max(lhs.c_.size(), rhs.c_.size()), Scalar(0));
  for (std::size_t k = 0; k < lhs.c_.size(); ++k) c[k] += lhs.c_[k];
  for (std::size_t k = 0; k < rhs.c_.size(); ++k) c[k] += rhs.c_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& lhs, const Polynomial& rhs) {
  std::vector<Scalar> c(std::max(lhs.c_.size(), rhs.c_.size()), Scalar(0));
  for (std::size_t k = 0; k < lhs.c_.size(); ++k) c[k] += lhs.c_[k];
  for (std::size_t k = 0; k < rhs.c_.size(); ++k) c[k] -= rhs.c_[k];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return {};
  std::vector<Scalar> c(lhs.c_.size() + rhs.c_.size() - 1, Scalar(0));
  for (std::size_t i = 0; i < lhs.c_.size(); ++i) {
    for (std::size_t j = 0; j < rhs.c_.size(); ++j) c[i + j] += lhs.c_[i] * rhs.c_[j];
  }
  return Polynomial(std::move(c));
}

DivMod divmod(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Scalar> r = num.coefficients();
  const int dn = den.degree();
  if (num.degree() < dn) return {Polynomial(), num};
  std::vector<Scalar> q(static_cast<std::size_t>(num.degree() - dn + 1), Scalar(0));
  for (int k = num.degree() - dn; k >= 0; --k) {
    const Scalar factor = r[static_cast<std::size_t>(k + dn)] / den.leading();
    q[static_cast<std::size_t>(k)] = factor;
    for (int j = 0; j <= dn; ++j) r[static_cast<std::size_t>(k + j)] -= factor * den.coeff(j);
    r[static_cast<std::size_t>(k + dn)] = Scalar(0);
  }
  r.resize(static_cast<std::size_t>(dn));
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divmod(a, b).remainder;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<std::pair<Polynomial, int>> square_free_decomposition(const Polynomial& p) {
  if (!p.exact()) throw std::invalid_argument("square_free_decomposition needs exact coefficients");
  std::vector<std::pair<Polynomial, int>> out;
  if (p.degree() < 1) return out;
  const Polynomial f = p.monic();
  const Polynomial df = f.derivative();
  const Polynomial a0 = gcd(f, df);
  Polynomial b = divmod(f, a0).quotient;
  Polynomial c = divmod(df, a0).quotient;
  Polynomial d = c - b.derivative();
  for (int i = 1; b.degree() >= 1; ++i) {
    const Polynomial a = gcd(b, d);
    b = divmod(b, a).quotient;
    c = divmod(d, a).quotient;
    d = c - b.derivative();
    if (a.degree() >= 1) out.emplace_back(a, i);
  }
  return out;
}

int count_real_roots(const Polynomial& p) {
  if (p.degree() < 1) return 0;
  std::vector<Polynomial> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    const Polynomial r = divmod(seq[seq.size() - 2], seq.back()).remainder;
    if (r.is_zero()) break;
    seq.push_back(Polynomial() - r);
  }
  auto changes = [&](bool at_plus_infinity) {
    int count = 0;
    int prev = 0;
    for (const auto& s : seq) {
      int sign = s.leading().sign();
      if (!at_plus_infinity && (s.degree() % 2 == 1)) sign = -sign;
      if (sign == 0) continue;
      if (prev != 0 && sign != prev) ++count;
      prev = sign;
    }
    return count;
  };
  return changes(false) - changes(true);
}

Scalar resultant(const Polynomial& a, const Polynomial& b) {
  const int m = a.degree();
  const int n = b.degree();
  if (m < 0 || n < 0) return Scalar(0);
  const int size = m + n;
  if (size == 0) return Scalar(1);
  std::vector<std::vector<Scalar>> mat(static_cast<std::size_t>(size), std::vector<Scalar>(static_cast<std::size_t>(size), Scalar(0)));
  for (int row = 0; row < n; ++row) {
    for (int k = 0; k <= m; ++k) mat[row][row + k] = a.coeff(m - k);
  }
  for (int row = 0; row < m; ++row) {
    for (int k = 0; k <= n; ++k) mat[n + row][row + k] = b.coeff(n - k);
  }
  const bool exact = a.exact() && b.exact();
  Scalar det(1);
  for (int col = 0; col < size; ++col) {
    int pivot = -1;
    for (int row = col; row < size; ++row) {
      if (mat[row][col].is_zero()) continue;
      if (pivot < 0 || (!exact && std::abs(mat[row][col].to_double()) > std::abs(mat[pivot][col].to_double()))) {
        pivot = row;
      }
      if (exact) break;
    }
    if (pivot < 0) return exact ? Scalar(0) : Scalar(0.0);
    if (pivot != col) {
      std::swap(mat[pivot], mat[col]);
      det = -det;
    }
    det *= mat[col][col];
    for (int row = col + 1; row < size; ++row) {
      if (mat[row][col].is_zero()) continue;
      const Scalar factor = mat[row][col] / mat[col][col];
      for (int k = col; k < size; ++k) mat[row][k] -= factor * mat[col][k];
    }
  }
  return det;
}

Scalar discriminant(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) throw std::invalid_argument("discriminant of a constant");
  const Scalar res = resultant(p, p.derivative());
  const int sign = ((n * (n - 1) / 2) % 2 == 0) ? 1 : -1;
  return Scalar(sign) * res / p.leading();
}

std::vector<std::complex<double>> companion_roots(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) return {};
  const double lc = p.leading().to_double();
  if (n == 1) return {std::complex<double>(-p.coeff(0).to_double() / lc, 0.0)};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -p.coeff(i).to_double() / lc;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("companion eigenvalue solver failed");
  std::vector<std::complex<double>> roots;
  for (int i = 0; i < n; ++i) roots.push_back(solver.eigenvalues()[i]);
  return roots;
}

std::optional<Scalar> recover_rational_root(const Polynomial& p, double approx) {
  if (!p.exact() || !std::isfinite(approx) || std::abs(approx) > 1e15) return std::nullopt;
  mpz_class h_prev(1), h_prev2(0), k_prev(0), k_prev2(1);
  long double x = approx;
  for (int iter = 0; iter < 48; ++iter) {
    const long double whole = std::floor(x);
    const mpz_class a(static_cast<double>(whole));
    const mpz_class h = a * h_prev + h_prev2;
    const mpz_class k = a * k_prev + k_prev2;
    const Scalar candidate = Scalar::ratio(h, k);
    if (p(candidate).is_zero()) return candidate;
    if (k > mpz_class("10000000000000")) break;
    const long double frac = x - whole;
    if (frac < 1e-17L) break;
    x = 1.0L / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return std::nullopt;
}

std::vector<RealRoot> real_roots(const Polynomial& p, double cluster_tol) {
  if (p.degree() < 1) return {};
  auto out = p.exact() ? real_roots_exact(p) : real_roots_float(p, cluster_tol);
  std::sort(out.begin(), out.end(), [](const RealRoot& l, const RealRoot& r) { return l.value < r.value; });
  return out;
}

}  // namespace wallach
