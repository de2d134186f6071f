#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <variant>

namespace ncmech {

using Rational = mpq_class;

enum class ScalarMode { exact, floating };

std::string_view to_string(ScalarMode mode);
ScalarMode parse_scalar_mode(std::string_view text);

/// A coefficient that is either an exact rational or a double.
///
/// Binary operations require both operands to share a mode and throw
/// ModeError otherwise. Conversion between modes is always explicit
/// (converted()).
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(Rational q) : value_(std::move(q)) { std::get<Rational>(value_).canonicalize(); }

  static Scalar exact(long num, long den = 1);
  static Scalar real(double v) { return Scalar(FloatTag{}, v); }
  static Scalar zero(ScalarMode mode);
  static Scalar one(ScalarMode mode);
  static Scalar from_int(long v, ScalarMode mode);

  /// Parses "p/q", an integer, or a decimal ("-1.25e-3"). Decimals are
  /// converted without rounding in exact mode.
  static Scalar parse(std::string_view text, ScalarMode mode);

  ScalarMode mode() const { return std::holds_alternative<Rational>(value_) ? ScalarMode::exact : ScalarMode::floating; }
  bool is_exact() const { return mode() == ScalarMode::exact; }
  bool is_zero() const;

  const Rational& rational() const;
  double to_double() const;
  Scalar converted(ScalarMode mode) const;

  /// "p/q" (or "p") in exact mode, 17 significant digits in float mode.
  std::string to_string() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  struct FloatTag {};
  Scalar(FloatTag, double v) : value_(v) {}

  std::variant<Rational, double> value_;
};

void require_same_mode(ScalarMode a, ScalarMode b, std::string_view context);

}  // namespace ncmech
