#ifndef RELMAJ_SCALAR_HPP
#define RELMAJ_SCALAR_HPP

#include <variant>

#include "relmaj/rational.hpp"

namespace relmaj {

/// Float-backend tolerance policy, single source of truth.
struct Tolerances {
  static constexpr double equality = 1e-12;   // |a-b| treated as equal
  static constexpr double slack = 1e-9;       // inequality slack
  static constexpr double support = 1e-12;    // float support threshold
};

/// Numeric value tagged by backend: exact rational or binary float64.
/// Mixed-backend arithmetic coerces exact -> float, never the reverse.
class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(const Rational& r) : v_(r) {}    // NOLINT(runtime/explicit)
  Scalar(double x) : v_(x) {}             // NOLINT(runtime/explicit)
  Scalar(long n) : v_(Rational(n)) {}     // NOLINT(runtime/explicit)
  Scalar(int n) : v_(Rational(n)) {}      // NOLINT(runtime/explicit)

  bool is_exact() const { return std::holds_alternative<Rational>(v_); }
  double as_double() const {
    return is_exact() ? std::get<Rational>(v_).to_double() : std::get<double>(v_);
  }
  /// Exact value; throws on the float backend.
  const Rational& rational() const;
  /// Exact value of whatever is stored (floats lifted to their binary value).
  Rational to_exact() const {
    return is_exact() ? std::get<Rational>(v_) : Rational::from_double(std::get<double>(v_));
  }

  Scalar operator+(const Scalar& o) const { return binop(o, [](auto a, auto b) { return a + b; }); }
  Scalar operator-(const Scalar& o) const { return binop(o, [](auto a, auto b) { return a - b; }); }
  Scalar operator*(const Scalar& o) const { return binop(o, [](auto a, auto b) { return a * b; }); }
  Scalar operator/(const Scalar& o) const { return binop(o, [](auto a, auto b) { return a / b; }); }
  Scalar operator-() const {
    return is_exact() ? Scalar(-std::get<Rational>(v_)) : Scalar(-std::get<double>(v_));
  }

  // Exact comparison when both exact, raw float comparison otherwise.
  bool operator==(const Scalar& o) const {
    if (is_exact() && o.is_exact()) return std::get<Rational>(v_) == std::get<Rational>(o.v_);
    return as_double() == o.as_double();
  }
  bool operator<(const Scalar& o) const {
    if (is_exact() && o.is_exact()) return std::get<Rational>(v_) < std::get<Rational>(o.v_);
    return as_double() < o.as_double();
  }
  bool operator<=(const Scalar& o) const { return *this < o || *this == o; }
  bool operator>(const Scalar& o) const { return o < *this; }
  bool operator>=(const Scalar& o) const { return o <= *this; }

  int sign() const {
    if (is_exact()) return std::get<Rational>(v_).sign();
    double x = std::get<double>(v_);
    return x < 0 ? -1 : x > 0 ? 1 : 0;
  }
  bool is_zero() const { return sign() == 0; }
  Scalar abs() const { return sign() < 0 ? -*this : *this; }

 private:
  template <typename F>
  Scalar binop(const Scalar& o, F f) const {
    if (is_exact() && o.is_exact()) return Scalar(f(std::get<Rational>(v_), std::get<Rational>(o.v_)));
    return Scalar(f(as_double(), o.as_double()));
  }
  std::variant<Rational, double> v_;
};

}  // namespace relmaj

#endif
