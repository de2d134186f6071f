#include "ncmech/scalar.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include "ncmech/error.hpp"

namespace ncmech {

std::string_view to_string(ScalarMode mode) { return mode == ScalarMode::exact ? "exact" : "float"; }

ScalarMode parse_scalar_mode(std::string_view text) {
  if (text == "exact") return ScalarMode::exact;
  if (text == "float") return ScalarMode::floating;
  throw InvalidArgument("unknown scalar mode '" + std::string(text) + "' (expected exact|float)");
}

void require_same_mode(ScalarMode a, ScalarMode b, std::string_view context) {
  if (a != b) {
    throw ModeError(std::string(context) + ": cannot mix " + std::string(to_string(a)) + " and " +
                    std::string(to_string(b)) + " scalars");
  }
}

Scalar Scalar::exact(long num, long den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  return Scalar(Rational(num, den));
}

Scalar Scalar::zero(ScalarMode mode) { return from_int(0, mode); }
Scalar Scalar::one(ScalarMode mode) { return from_int(1, mode); }

Scalar Scalar::from_int(long v, ScalarMode mode) {
  return mode == ScalarMode::exact ? Scalar(Rational(v)) : real(static_cast<double>(v));
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Exact value of a decimal literal [+-]digits[.digits][(e|E)[+-]digits].
Rational parse_decimal(const std::string& s) {
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool any = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++], any = true;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++], ++scale, any = true;
  }
  if (!any) throw InvalidArgument("malformed number '" + s + "'");
  long exponent = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::size_t used = 0;
    try {
      exponent = std::stol(s.substr(i), &used);
    } catch (const std::exception&) {
      throw InvalidArgument("malformed exponent in '" + s + "'");
    }
    i += used;
  }
  if (i != s.size()) throw InvalidArgument("malformed number '" + s + "'");
  mpz_class num(digits, 10);
  mpz_class ten_pow;
  long shift = exponent - scale;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Scalar Scalar::parse(std::string_view text, ScalarMode mode) {
  const std::string s = trim(text);
  if (s.empty()) throw InvalidArgument("empty scalar literal");
  Rational q;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const Rational num = parse_decimal(trim(s.substr(0, slash)));
    const Rational den = parse_decimal(trim(s.substr(slash + 1)));
    if (den == 0) throw InvalidArgument("zero denominator in '" + s + "'");
    q = num / den;
  } else {
    q = parse_decimal(s);
  }
  return mode == ScalarMode::exact ? Scalar(q) : real(q.get_d());
}

bool Scalar::is_zero() const {
  if (auto* q = std::get_if<Rational>(&value_)) return sgn(*q) == 0;
  return std::get<double>(value_) == 0.0;
}

const Rational& Scalar::rational() const {
  if (auto* q = std::get_if<Rational>(&value_)) return *q;
  throw ModeError("rational() requested from a float scalar");
}

double Scalar::to_double() const {
  if (auto* q = std::get_if<Rational>(&value_)) return q->get_d();
  return std::get<double>(value_);
}

Scalar Scalar::converted(ScalarMode target) const {
  if (target == mode()) return *this;
  if (target == ScalarMode::floating) return real(to_double());
  const double v = std::get<double>(value_);
  if (!std::isfinite(v)) throw NumericalError("cannot convert non-finite value to a rational");
  return Scalar(Rational(v));
}

std::string Scalar::to_string() const {
  if (auto* q = std::get_if<Rational>(&value_)) return q->get_str();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
  return buf;
}

Scalar Scalar::operator-() const {
  if (auto* q = std::get_if<Rational>(&value_)) return Scalar(Rational(-*q));
  return real(-std::get<double>(value_));
}

#define NCMECH_SCALAR_OP(op, name)                                          \
  Scalar& Scalar::operator op##=(const Scalar& o) {                         \
    require_same_mode(mode(), o.mode(), "Scalar " name);                    \
    if (auto* q = std::get_if<Rational>(&value_)) {                         \
      *q op## = std::get<Rational>(o.value_);                               \
    } else {                                                                \
      std::get<double>(value_) op## = std::get<double>(o.value_);           \
    }                                                                       \
    return *this;                                                           \
  }

NCMECH_SCALAR_OP(+, "addition")
NCMECH_SCALAR_OP(-, "subtraction")
NCMECH_SCALAR_OP(*, "multiplication")
#undef NCMECH_SCALAR_OP

Scalar& Scalar::operator/=(const Scalar& o) {
  require_same_mode(mode(), o.mode(), "Scalar division");
  if (o.is_zero() && is_exact()) throw InvalidArgument("division by exact zero");
  if (auto* q = std::get_if<Rational>(&value_)) {
    *q /= std::get<Rational>(o.value_);
  } else {
    std::get<double>(value_) /= std::get<double>(o.value_);
  }
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  require_same_mode(a.mode(), b.mode(), "Scalar comparison");
  return a.value_ == b.value_;
}

}  // namespace ncmech
