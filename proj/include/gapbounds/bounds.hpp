#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "gapbounds/interval.hpp"
#include "gapbounds/rational.hpp"

namespace gapbounds {

// One parameter set {a, b, c, x0} asserting
//
//   |theta(x) - x| < a * x * (ln x)^b * exp(-c * sqrt(ln x))    for x >= x0,
//
// where theta is the first Chebyshev function.  Coefficients are kept as
// exact rationals together with cached double enclosures.
struct ChebyshevBound {
  Rational a_exact, b_exact, c_exact;
  Interval a, b, c;
  Threshold x0;
  std::string label;
  std::string source;

  ChebyshevBound(Rational a_, Rational b_, Rational c_, Threshold x0_,
                 std::string label_, std::string source_ = "")
      : a_exact(a_), b_exact(b_), c_exact(c_),
        a(a_.enclosure()), b(b_.enclosure()), c(c_.enclosure()),
        x0(x0_), label(std::move(label_)), source(std::move(source_)) {
    if (!a_exact.positive()) throw std::invalid_argument("ChebyshevBound: a must be positive");
    if (b_exact.negative()) throw std::invalid_argument("ChebyshevBound: b must be nonnegative");
    if (!c_exact.positive()) throw std::invalid_argument("ChebyshevBound: c must be positive");
    const bool x0_ok = x0.is_exp ? x0.exp_k >= 0.6931471805599453 : x0.n >= 2;
    if (!x0_ok) throw std::invalid_argument("ChebyshevBound: x0 must be >= 2");
    if (label.empty()) throw std::invalid_argument("ChebyshevBound: label must be nonempty");
  }

  bool b_is_zero() const { return b_exact.is_zero(); }
};

// f(x) = a (ln x)^b exp(-c sqrt(ln x)) evaluated over an x-enclosure.
// The interval extension is sound for any x range with lo > 1.
inline Interval f_eval(const ChebyshevBound& bd, Interval x) {
  if (!(x.lo > 1.0)) throw std::domain_error("f_eval: requires x > 1");
  const Interval u = iv_log(x);
  if (u.lo <= 0.0) throw std::domain_error("f_eval: x too close to 1 for a positive ln enclosure");
  Interval out = bd.a * iv_exp(-(bd.c * iv_sqrt(u)));
  if (!bd.b_is_zero()) out = out * iv_pow(u, bd.b);
  return out;
}

inline Interval f_eval(const ChebyshevBound& bd, double x) {
  return f_eval(bd, Interval(x));
}

// Location and height of the maximum of f, plus the threshold from which
// the gap-bound derivation is valid.
struct DerivedThresholds {
  Interval x_peak;   // exp((2b/c)^2); exactly 1 when b = 0
  Interval f_peak;   // a (2b/c)^(2b) exp(-2b); exactly a when b = 0
  Threshold x_star;  // max(x0, ceil(x_peak))
};

inline DerivedThresholds derive_thresholds(const ChebyshevBound& bd) {
  DerivedThresholds out;
  if (bd.b_is_zero()) {
    out.x_peak = Interval(1.0);
    out.f_peak = bd.a;
    out.x_star = max(bd.x0, Threshold::exact(1));
    return out;
  }
  const Interval two_b = Interval(2.0) * bd.b;
  const Interval r = two_b / bd.c;
  out.x_peak = iv_exp(r * r);
  out.f_peak = bd.a * iv_pow(r, two_b) * iv_exp(-two_b);
  if (!std::isfinite(out.x_peak.hi))
    throw std::overflow_error("derive_thresholds: x_peak overflows double range");
  const double cl = std::ceil(out.x_peak.lo);
  const double ch = std::ceil(out.x_peak.hi);
  if (cl != ch)
    throw std::runtime_error("derive_thresholds: x_peak enclosure straddles an integer");
  out.x_star = max(bd.x0, Threshold::exact(static_cast<std::uint64_t>(cl)));
  return out;
}

// Trivalent check whether the ratio form is admissible (f_peak <= 1).
inline Ternary f_peak_at_most_one(const DerivedThresholds& d) {
  if (d.f_peak.hi <= 1.0) return Ternary::True;
  if (d.f_peak.lo > 1.0) return Ternary::False;
  return Ternary::Unknown;
}

// The two shapes of the relative prime-gap bound.
enum class GapBoundForm { Ratio, Linear };

inline const char* form_name(GapBoundForm f) {
  return f == GapBoundForm::Ratio ? "ratio" : "linear";
}

inline GapBoundForm parse_form(std::string_view s) {
  if (s == "ratio") return GapBoundForm::Ratio;
  if (s == "linear") return GapBoundForm::Linear;
  throw std::invalid_argument("unknown gap-bound form '" + std::string(s) + "'");
}

// 2f/(1-f), admissible only while f < 1.  The guard is per evaluation
// point: the global f_peak <= 1 requirement is the verifier's concern.
inline Interval ratio_from_f(Interval f) {
  if (!(f.hi < 1.0))
    throw std::domain_error("ratio form: f enclosure reaches 1 at this point");
  return (Interval(2.0) * f) / (Interval(1.0) - f);
}

inline Interval gap_bound_ratio(const ChebyshevBound& bd, double p) {
  if (!(p >= 2.0)) throw std::domain_error("gap_bound_ratio: requires p >= 2");
  return ratio_from_f(f_eval(bd, p));
}

inline Interval gap_bound_linear(const ChebyshevBound& bd, double p) {
  if (!(p > 1.0)) throw std::domain_error("gap_bound_linear: requires p > 1");
  return Interval(3.0) * f_eval(bd, p);
}

inline Interval gap_bound_value(const ChebyshevBound& bd, GapBoundForm form, double p) {
  return form == GapBoundForm::Ratio ? gap_bound_ratio(bd, p) : gap_bound_linear(bd, p);
}

// Exact 3a, the coefficient of the linear form (integer arithmetic when a
// is an integer).
inline Rational linear_coefficient(const ChebyshevBound& bd) { return bd.a_exact.times(3); }

// Sign of f' via f'/f = b/(x ln x) - c/(2 x sqrt(ln x)): f is decreasing
// exactly for x > x_peak.
inline bool is_f_monotone_decreasing_at(const ChebyshevBound& bd, double x) {
  if (!(x > 1.0)) throw std::domain_error("is_f_monotone_decreasing_at: requires x > 1");
  if (bd.b_is_zero()) return true;  // x_peak = 1
  const DerivedThresholds d = derive_thresholds(bd);
  if (x > d.x_peak.hi) return true;
  if (x <= d.x_peak.lo) return false;
  throw std::runtime_error("is_f_monotone_decreasing_at: x not separable from x_peak");
}

// Enclosure of 1 + b/u - c/(2 sqrt(u)) over a ln-x range; positive means
// x*f(x) is nondecreasing there, which justifies using the left endpoint
// as a lower bound for x*f(x) on a prime interval.
inline Interval xf_nondecreasing_margin(const ChebyshevBound& bd, Interval u) {
  if (u.lo <= 0.0) throw std::domain_error("xf_nondecreasing_margin: requires ln x > 0");
  Interval m = Interval(1.0) - bd.c / (Interval(2.0) * iv_sqrt(u));
  if (!bd.b_is_zero()) m = m + bd.b / u;
  return m;
}

// log10 of f and of the gap-bound forms given ln x directly.  Display-only
// path for arguments like exp(10^6) whose f value under- or overflows
// double range; not used in any rigorous verdict.
inline double log10_f(const ChebyshevBound& bd, double ln_x) {
  if (!(ln_x > 0.0)) throw std::domain_error("log10_f: requires ln x > 0");
  constexpr double kLog10E = 0.4342944819032518;  // log10(e)
  double v = std::log10(bd.a_exact.approx()) - bd.c_exact.approx() * std::sqrt(ln_x) * kLog10E;
  if (!bd.b_is_zero()) v += bd.b_exact.approx() * std::log10(ln_x);
  return v;
}

inline double log10_gap_bound(const ChebyshevBound& bd, GapBoundForm form, double ln_x) {
  const double lf = log10_f(bd, ln_x);
  if (form == GapBoundForm::Linear) return lf + std::log10(3.0);
  if (lf >= 0.0) throw std::domain_error("ratio form: f >= 1 at this point");
  const double f = std::pow(10.0, lf);  // may underflow to 0; correction below vanishes then
  return lf + std::log10(2.0) - std::log10(1.0 - f);
}

}  // namespace gapbounds
