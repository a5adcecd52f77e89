#pragma once

// Independent high-precision oracle for the test suites.  Evaluates every
// quantity under test with 256-bit MPFR arithmetic directly from the exact
// rational coefficients, sharing no code with the enclosure paths it
// checks.  Trial division stands in for the sieve.

#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>

#include "gapbounds/bounds.hpp"
#include "gapbounds/interval.hpp"

namespace oracle {

inline constexpr mpfr_prec_t kPrec = 256;  // ~77 decimal digits

class Big {
 public:
  Big() {
    mpfr_init2(v_, kPrec);
    mpfr_set_zero(v_, 1);
  }
  explicit Big(double d) : Big() { mpfr_set_d(v_, d, MPFR_RNDN); }
  explicit Big(const char* decimal) : Big() {
    if (mpfr_set_str(v_, decimal, 10, MPFR_RNDN) != 0)
      throw std::invalid_argument(std::string("Big: bad literal ") + decimal);
  }
  explicit Big(const gapbounds::Rational& r) : Big() {
    mpfr_set_si(v_, r.num, MPFR_RNDN);
    mpfr_div_si(v_, v_, r.den, MPFR_RNDN);
  }
  Big(const Big& o) : Big() { mpfr_set(v_, o.v_, MPFR_RNDN); }
  Big& operator=(const Big& o) {
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~Big() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  friend Big operator+(const Big& a, const Big& b) { Big r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Big operator-(const Big& a, const Big& b) { Big r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Big operator*(const Big& a, const Big& b) { Big r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Big operator/(const Big& a, const Big& b) { Big r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend bool operator<(const Big& a, const Big& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>=(const Big& a, const Big& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

  static Big log_of(const Big& x) { Big r; mpfr_log(r.v_, x.v_, MPFR_RNDN); return r; }
  static Big sqrt_of(const Big& x) { Big r; mpfr_sqrt(r.v_, x.v_, MPFR_RNDN); return r; }
  static Big exp_of(const Big& x) { Big r; mpfr_exp(r.v_, x.v_, MPFR_RNDN); return r; }
  static Big pow_of(const Big& x, const Big& e) { Big r; mpfr_pow(r.v_, x.v_, e.v_, MPFR_RNDN); return r; }
  static Big neg_of(const Big& x) { Big r; mpfr_neg(r.v_, x.v_, MPFR_RNDN); return r; }

 private:
  mpfr_t v_;
};

inline Big f_value(const gapbounds::ChebyshevBound& bd, double x) {
  const Big u = Big::log_of(Big(x));
  Big out = Big(bd.a_exact) * Big::exp_of(Big::neg_of(Big(bd.c_exact) * Big::sqrt_of(u)));
  if (!bd.b_is_zero()) out = out * Big::pow_of(u, Big(bd.b_exact));
  return out;
}

inline Big ratio_bound_value(const gapbounds::ChebyshevBound& bd, double p) {
  const Big f = f_value(bd, p);
  if (f >= Big(1.0)) throw std::domain_error("oracle: f >= 1, ratio form inapplicable");
  return (Big(2.0) * f) / (Big(1.0) - f);
}

inline Big linear_bound_value(const gapbounds::ChebyshevBound& bd, double p) {
  return Big(3.0) * f_value(bd, p);
}

inline Big gap_bound_value(const gapbounds::ChebyshevBound& bd, gapbounds::GapBoundForm form,
                           double p) {
  return form == gapbounds::GapBoundForm::Ratio ? ratio_bound_value(bd, p)
                                                : linear_bound_value(bd, p);
}

inline Big x_peak_value(const gapbounds::ChebyshevBound& bd) {
  if (bd.b_is_zero()) return Big(1.0);
  const Big r = (Big(2.0) * Big(bd.b_exact)) / Big(bd.c_exact);
  return Big::exp_of(r * r);
}

inline Big f_peak_value(const gapbounds::ChebyshevBound& bd) {
  if (bd.b_is_zero()) return Big(bd.a_exact);
  const Big two_b = Big(2.0) * Big(bd.b_exact);
  const Big r = two_b / Big(bd.c_exact);
  return Big(bd.a_exact) * Big::pow_of(r, two_b) * Big::exp_of(Big::neg_of(two_b));
}

// Exact comparison of the rational g/p against an oracle value.
inline int cmp_rel_gap(std::uint64_t g, std::uint64_t p, const Big& v) {
  Big r;
  mpfr_set_ui(r.raw(), g, MPFR_RNDN);
  mpfr_div_ui(r.raw(), r.raw(), p, MPFR_RNDN);  // exact to 2^-256 relative
  return mpfr_cmp(r.raw(), v.raw());
}

inline bool contains(const gapbounds::Interval& iv, const Big& v) {
  return mpfr_cmp_d(v.raw(), iv.lo) >= 0 && mpfr_cmp_d(v.raw(), iv.hi) <= 0;
}

// |a - b| <= tol * |b|
inline bool close_rel(const Big& a, const Big& b, double tol) {
  Big d = a - b;
  mpfr_abs(d.raw(), d.raw(), MPFR_RNDN);
  Big s = b;
  mpfr_abs(s.raw(), s.raw(), MPFR_RNDN);
  mpfr_mul_d(s.raw(), s.raw(), tol, MPFR_RNDN);
  return mpfr_cmp(d.raw(), s.raw()) <= 0;
}

inline bool is_prime_naive(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t next_prime_naive(std::uint64_t n) {
  std::uint64_t m = n + 1;
  while (!is_prime_naive(m)) ++m;
  return m;
}

// theta(n) summed at 256 bits over trial-division primes.
inline Big theta_naive(std::uint64_t n) {
  Big sum;
  for (std::uint64_t k = 2; k <= n; ++k) {
    if (!is_prime_naive(k)) continue;
    Big t;
    mpfr_set_ui(t.raw(), k, MPFR_RNDN);
    mpfr_log(t.raw(), t.raw(), MPFR_RNDN);
    mpfr_add(sum.raw(), sum.raw(), t.raw(), MPFR_RNDN);
  }
  return sum;
}

}  // namespace oracle
