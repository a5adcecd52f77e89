#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace gapbounds {

// Verdict of a comparison between two enclosures.  Unknown means the
// enclosures overlap, so the exact values cannot be ordered at the current
// precision; callers either escalate precision or report the point as
// inconclusive.  A bound check is never allowed to turn Unknown into a
// pass/fail silently.
enum class Ternary { True, False, Unknown };

inline double next_down(double v) {
  return std::nextafter(v, -std::numeric_limits<double>::infinity());
}
inline double next_up(double v) {
  return std::nextafter(v, std::numeric_limits<double>::infinity());
}
inline double step_down(double v, int ulps) {
  while (ulps-- > 0) v = next_down(v);
  return v;
}
inline double step_up(double v, int ulps) {
  while (ulps-- > 0) v = next_up(v);
  return v;
}

// Outward padding for results of ln/exp/pow.  glibc keeps these within
// ~1 ulp of the exact value; 4 ulps is the documented safety constant used
// throughout.  (+,-,*,/ and sqrt are correctly rounded, 1 ulp suffices.)
inline constexpr int kLibmPadUlps = 4;

// Closed interval [lo, hi] guaranteed to contain the exact real value of
// the expression it was computed from.  All operations round endpoints
// outward, so containment survives arbitrary composition and any verdict
// obtained through strictly_less() is a statement about exact reals.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  explicit Interval(double point) : lo(point), hi(point) { check(); }
  Interval(double l, double h) : lo(l), hi(h) { check(); }

  // Tightest enclosure of num/den (both exactly representable as doubles):
  // pads only when the quotient is inexact, so 1/4 stays the point 0.25
  // while 1/3 becomes a strict two-sided enclosure.
  static Interval from_ratio(long long num, long long den);

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  double rel_width() const {
    double scale = std::fmax(std::fabs(lo), std::fabs(hi));
    return scale > 0.0 ? width() / scale : width();
  }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool is_point() const { return lo == hi; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  void check() const {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi)
      throw std::invalid_argument("Interval: endpoints must satisfy lo <= hi");
  }
};

inline Interval operator-(Interval x) { return Interval(-x.hi, -x.lo); }

inline Interval operator+(Interval x, Interval y) {
  return Interval(next_down(x.lo + y.lo), next_up(x.hi + y.hi));
}

inline Interval operator-(Interval x, Interval y) { return x + (-y); }

inline Interval operator*(Interval x, Interval y) {
  const double p1 = x.lo * y.lo, p2 = x.lo * y.hi;
  const double p3 = x.hi * y.lo, p4 = x.hi * y.hi;
  return Interval(next_down(std::fmin(std::fmin(p1, p2), std::fmin(p3, p4))),
                  next_up(std::fmax(std::fmax(p1, p2), std::fmax(p3, p4))));
}

inline Interval operator/(Interval x, Interval y) {
  if (y.lo <= 0.0 && y.hi >= 0.0)
    throw std::domain_error("Interval division: divisor encloses zero");
  const double q1 = x.lo / y.lo, q2 = x.lo / y.hi;
  const double q3 = x.hi / y.lo, q4 = x.hi / y.hi;
  return Interval(next_down(std::fmin(std::fmin(q1, q2), std::fmin(q3, q4))),
                  next_up(std::fmax(std::fmax(q1, q2), std::fmax(q3, q4))));
}

inline Interval Interval::from_ratio(long long num, long long den) {
  if (den <= 0) throw std::domain_error("from_ratio: denominator must be positive");
  const double n = static_cast<double>(num);
  const double d = static_cast<double>(den);
  const double q = n / d;
  // q*d - n is exact in double precision for |num|,den <= 2^53, so the sign
  // tells which side of q the true quotient lies on.
  const double r = std::fma(q, d, -n);
  if (r > 0.0) return Interval(next_down(q), q);
  if (r < 0.0) return Interval(q, next_up(q));
  return Interval(q);
}

// Natural logarithm.  Monotone, so endpoint evaluation plus outward padding
// is an enclosure.
inline Interval iv_log(Interval x) {
  if (x.lo <= 0.0) throw std::domain_error("iv_log: requires lo > 0");
  const double lo = step_down(std::log(x.lo), kLibmPadUlps);
  const double hi = x.is_point() ? step_up(std::log(x.lo), kLibmPadUlps)
                                 : step_up(std::log(x.hi), kLibmPadUlps);
  return Interval(lo, hi);
}

inline Interval iv_sqrt(Interval x) {
  if (x.lo < 0.0) throw std::domain_error("iv_sqrt: requires lo >= 0");
  // sqrt is correctly rounded per IEEE 754.
  return Interval(next_down(std::sqrt(x.lo)), next_up(std::sqrt(x.hi)));
}

inline Interval iv_exp(Interval x) {
  const double lo = std::fmax(0.0, step_down(std::exp(x.lo), kLibmPadUlps));
  const double hi = x.is_point() ? step_up(std::exp(x.lo), kLibmPadUlps)
                                 : step_up(std::exp(x.hi), kLibmPadUlps);
  return Interval(lo, hi);
}

// x^e for positive base.  x^e is monotone in each argument separately
// (direction depending on the sign of e and on base vs 1), so the extrema
// over a box are attained at the four corners.
inline Interval iv_pow(Interval x, Interval e) {
  if (x.lo <= 0.0) throw std::domain_error("iv_pow: requires base lo > 0");
  if (e.is_point()) {
    if (e.lo == 0.0) return Interval(1.0);
    if (e.lo == 1.0) return x;
  }
  const double c1 = std::pow(x.lo, e.lo), c2 = std::pow(x.lo, e.hi);
  const double c3 = std::pow(x.hi, e.lo), c4 = std::pow(x.hi, e.hi);
  const double lo = std::fmin(std::fmin(c1, c2), std::fmin(c3, c4));
  const double hi = std::fmax(std::fmax(c1, c2), std::fmax(c3, c4));
  return Interval(std::fmax(0.0, step_down(lo, kLibmPadUlps)), step_up(hi, kLibmPadUlps));
}

inline Interval iv_pow(Interval x, double e) { return iv_pow(x, Interval(e)); }

// True  iff every point of x is strictly below every point of y.
// False iff no point of x is strictly below any point of y.
inline Ternary strictly_less(Interval x, Interval y) {
  if (x.hi < y.lo) return Ternary::True;
  if (x.lo >= y.hi) return Ternary::False;
  return Ternary::Unknown;
}

// Exact sign of num/den - t for nonnegative integers num, den (den > 0) and
// a double t.  Decomposes t into mant*2^shift and compares integers, so the
// verdict is exact: no rounding is involved.  Used to compare an exact
// rational prime gap g/p against an enclosure endpoint.
inline int cmp_ratio(std::uint64_t num, std::uint64_t den, double t) {
  if (den == 0) throw std::domain_error("cmp_ratio: zero denominator");
  if (std::isnan(t)) throw std::domain_error("cmp_ratio: NaN threshold");
  if (std::isinf(t)) return t > 0 ? -1 : 1;
  if (t <= 0.0) {
    if (t < 0.0) return 1;
    return num == 0 ? 0 : 1;
  }
  int e2 = 0;
  const double m = std::frexp(t, &e2);  // t = m * 2^e2, m in [0.5, 1)
  const auto mant = static_cast<unsigned __int128>(static_cast<std::uint64_t>(std::ldexp(m, 53)));
  const int shift = e2 - 53;  // t = mant * 2^shift exactly
  unsigned __int128 lhs = num;
  unsigned __int128 rhs = mant * den;
  if (shift > 0) {
    if (shift >= 128 || (rhs >> (128 - shift)) != 0) return -1;  // rhs overflows: t*den > num
    rhs <<= shift;
  } else if (shift < 0) {
    const int s = -shift;
    if (num == 0) return -1;
    if (s >= 128 || (lhs >> (128 - s)) != 0) return 1;  // lhs overflows: num*2^s > rhs
    lhs <<= s;
  }
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

}  // namespace gapbounds
