#ifndef RELMAJ_RATIONAL_HPP
#define RELMAJ_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace relmaj {

/// Arbitrary-precision rational, always canonical: lowest terms, denominator > 0.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}                 // NOLINT(runtime/explicit)
  Rational(long num, long den);
  explicit Rational(const mpq_class& v);
  explicit Rational(const mpz_class& num, const mpz_class& den);

  /// Exact value of an IEEE-754 double (every finite double is rational).
  static Rational from_double(double x);
  /// Parses "num/den" or a plain integer string.
  static Rational parse(const std::string& s);
  /// Best rational approximation to x with denominator <= max_den
  /// (continued-fraction convergents / semiconvergents).
  static Rational approximate(double x, std::int64_t max_den);

  Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  bool operator==(const Rational& o) const { return mpq_cmp(v_.get_mpq_t(), o.v_.get_mpq_t()) == 0; }
  std::strong_ordering operator<=>(const Rational& o) const {
    int c = mpq_cmp(v_.get_mpq_t(), o.v_.get_mpq_t());
    return c < 0 ? std::strong_ordering::less
         : c > 0 ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
  }

  int sign() const { return mpq_sgn(v_.get_mpq_t()); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  Rational abs() const { return sign() < 0 ? -*this : *this; }

  double to_double() const { return v_.get_d(); }
  /// "num/den" with den >= 1, e.g. "3/4", "-1/2", "5/1".
  std::string to_fraction_string() const;

  mpz_class floor() const;
  mpz_class ceil() const;

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

 private:
  mpq_class v_;
};

/// Least common multiple of the denominators (>= 1).
mpz_class common_denominator(const std::vector<Rational>& values);

}  // namespace relmaj

#endif
