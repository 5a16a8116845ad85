#include "wallach/scalar.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <nlohmann/json.hpp>

namespace wallach {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  std::string text(s);
  if (!text.empty() && text[0] == '+') text.erase(0, 1);
  return mpz_class(text, 10);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Scalar::Scalar(mpq_class q) : value_(std::move(q)) {
  std::get<mpq_class>(value_).canonicalize();
}

Scalar Scalar::ratio(long num, long den) { return ratio(mpz_class(num), mpz_class(den)); }

Scalar Scalar::ratio(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  return Scalar(mpq_class(num, den));
}

Scalar Scalar::parse(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = trim(s.substr(0, slash));
    const auto den = trim(s.substr(slash + 1));
    if (!is_integer_literal(num) || !is_integer_literal(den)) {
      throw std::invalid_argument("malformed rational '" + std::string(s) + "'");
    }
    const mpz_class d = parse_integer(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    return ratio(parse_integer(num), d);
  }
  if (is_integer_literal(s)) return Scalar(mpq_class(parse_integer(s)));

  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw std::invalid_argument("malformed number '" + std::string(s) + "'");
  }
  return Scalar(v);
}

const mpq_class& Scalar::as_rational() const {
  if (!is_exact()) throw std::logic_error("Scalar is not exact");
  return std::get<mpq_class>(value_);
}

double Scalar::to_double() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return q->get_d();
  return std::get<double>(value_);
}

int Scalar::sign() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q);
  const double d = std::get<double>(value_);
  return (d > 0) - (d < 0);
}

bool Scalar::is_integer() const {
  const auto* q = std::get_if<mpq_class>(&value_);
  return q != nullptr && q->get_den() == 1;
}

std::string Scalar::str() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return q->get_str();
  return fmt::format("{:.17g}", std::get<double>(value_));
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  if (is_exact() && rhs.is_exact()) {
    std::get<mpq_class>(value_) += rhs.as_rational();
  } else {
    value_ = to_double() + rhs.to_double();
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  if (is_exact() && rhs.is_exact()) {
    std::get<mpq_class>(value_) -= rhs.as_rational();
  } else {
    value_ = to_double() - rhs.to_double();
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  if (is_exact() && rhs.is_exact()) {
    std::get<mpq_class>(value_) *= rhs.as_rational();
  } else {
    value_ = to_double() * rhs.to_double();
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  if (is_exact() && rhs.is_exact()) {
    if (sgn(rhs.as_rational()) == 0) throw DomainError("exact division by zero");
    std::get<mpq_class>(value_) /= rhs.as_rational();
  } else {
    value_ = to_double() / rhs.to_double();
  }
  return *this;
}

Scalar operator-(const Scalar& v) {
  if (v.is_exact()) return Scalar(mpq_class(-v.as_rational()));
  return Scalar(-v.to_double());
}

bool operator==(const Scalar& lhs, const Scalar& rhs) {
  if (lhs.is_exact() && rhs.is_exact()) return lhs.as_rational() == rhs.as_rational();
  return lhs.to_double() == rhs.to_double();
}

std::partial_ordering operator<=>(const Scalar& lhs, const Scalar& rhs) {
  if (lhs.is_exact() && rhs.is_exact()) {
    const int c = cmp(lhs.as_rational(), rhs.as_rational());
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return lhs.to_double() <=> rhs.to_double();
}

Scalar abs(const Scalar& v) { return v.sign() < 0 ? -v : v; }

Scalar sqrt(const Scalar& v) {
  if (v.is_exact() && v.sign() >= 0) {
    const mpq_class& q = v.as_rational();
    if (mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t())) {
      mpz_class num;
      mpz_class den;
      mpz_sqrt(num.get_mpz_t(), q.get_num_mpz_t());
      mpz_sqrt(den.get_mpz_t(), q.get_den_mpz_t());
      return Scalar::ratio(num, den);
    }
  }
  return Scalar(std::sqrt(v.to_double()));
}

Scalar pow(const Scalar& base, int exponent) {
  if (exponent < 0) return Scalar(1) / pow(base, -exponent);
  Scalar result(1);
  Scalar b = base;
  for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
    if (e & 1U) result *= b;
    if (e > 1) b *= b;
  }
  return result;
}

Scalar to_float(const Scalar& v) { return Scalar(v.to_double()); }

void to_json(nlohmann::json& j, const Scalar& v) {
  if (v.is_exact()) {
    j = v.str();
  } else {
    j = v.to_double();
  }
}

}  // namespace wallach
