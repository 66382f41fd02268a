#include "relmaj/rational.hpp"

#include <cmath>
#include <limits>

#include "relmaj/errors.hpp"

namespace relmaj {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::InvalidDistribution: return "invalid_distribution";
    case ErrorKind::InvalidChannel: return "invalid_channel";
    case ErrorKind::NotMajorized: return "not_majorized";
    case ErrorKind::RankDeficient: return "rank_deficient";
    case ErrorKind::IrrationalInput: return "irrational_input";
    case ErrorKind::EqualRelativeSpectra: return "equal_relative_spectra";
    case ErrorKind::PermutationEqual: return "permutation_equal";
    case ErrorKind::StructureError: return "structure_error";
    case ErrorKind::ConditionNotMet: return "condition_not_met";
    case ErrorKind::ParseError: return "parse_error";
    case ErrorKind::InvalidArgument: return "invalid_argument";
  }
  return "unknown";
}

void throw_error(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(error_kind_name(kind)) + ": " + what);
}

Rational::Rational(long num, long den) : v_(num, den) {
  if (den == 0) throw_error(ErrorKind::InvalidArgument, "zero denominator");
  v_.canonicalize();
}

Rational::Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

Rational::Rational(const mpz_class& num, const mpz_class& den) : v_(num, den) {
  if (den == 0) throw_error(ErrorKind::InvalidArgument, "zero denominator");
  v_.canonicalize();
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x))
    throw_error(ErrorKind::InvalidArgument, "non-finite double has no rational value");
  return Rational(mpq_class(x));
}

Rational Rational::parse(const std::string& s) {
  auto slash = s.find('/');
  mpq_class v;
  if (v.set_str(s, 10) != 0)
    throw_error(ErrorKind::ParseError, "not a rational literal: '" + s + "'");
  if (slash != std::string::npos && v.get_den() == 0)
    throw_error(ErrorKind::ParseError, "zero denominator in '" + s + "'");
  v.canonicalize();
  return Rational(v);
}

Rational Rational::approximate(double x, std::int64_t max_den) {
  if (max_den < 1) throw_error(ErrorKind::InvalidArgument, "max_den must be >= 1");
  Rational exact = from_double(x);
  if (exact.denominator() <= max_den) return exact;

  // Stern-Brocot walk; the best approximation with bounded denominator is a
  // convergent or semiconvergent of the continued fraction of x.
  const mpz_class cap(static_cast<long>(max_den));
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;  // last two convergents
  mpq_class rem = exact.raw();
  bool neg = rem < 0;
  if (neg) rem = -rem;
  const mpq_class target = rem;
  while (true) {
    mpz_class a = rem.get_num() / rem.get_den();  // floor (rem >= 0)
    mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > cap) {
      // largest admissible semiconvergent step, judged against the original
      mpz_class k = (q1 == 0) ? mpz_class(0) : mpz_class((cap - q0) / q1);
      mpz_class ps = k * p1 + p0, qs = k * q1 + q0;
      mpq_class best;
      if (qs > 0 && q1 > 0) {
        mpq_class cand1(ps, qs), cand2(p1, q1);
        cand1.canonicalize();
        cand2.canonicalize();
        mpq_class d1(cand1 - target), d2(cand2 - target);
        if (d1 < 0) d1 = -d1;
        if (d2 < 0) d2 = -d2;
        best = (d1 < d2) ? cand1 : cand2;
      } else if (qs > 0) {
        best = mpq_class(ps, qs);
        best.canonicalize();
      } else {
        best = mpq_class(p1, q1);
        best.canonicalize();
      }
      if (neg) best = -best;
      return Rational(best);
    }
    mpq_class frac = rem - mpq_class(a);
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (frac == 0) {
      mpq_class v(p1, q1);
      v.canonicalize();
      if (neg) v = -v;
      return Rational(v);
    }
    rem = 1 / frac;
  }
}

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw_error(ErrorKind::InvalidArgument, "division by zero");
  return Rational(mpq_class(v_ / o.v_));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw_error(ErrorKind::InvalidArgument, "division by zero");
  v_ /= o.v_;
  return *this;
}

std::string Rational::to_fraction_string() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

mpz_class Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
  return q;
}

mpz_class Rational::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
  return q;
}

mpz_class common_denominator(const std::vector<Rational>& values) {
  mpz_class l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.denominator().get_mpz_t());
  return l;
}

}  // namespace relmaj
