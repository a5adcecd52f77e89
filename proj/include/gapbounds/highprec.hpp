#pragma once

#include <mpfr.h>

#include <stdexcept>

#include "gapbounds/bounds.hpp"
#include "gapbounds/interval.hpp"

namespace gapbounds {

// Precision-escalation fallback: re-derives enclosures with MPFR directed
// rounding from the exact rational coefficients.  Everything stays at MPFR
// precision until the final outward conversion to double, so the escalated
// enclosure is genuinely tighter than the double path that triggered it.
// Only consulted on Unknown verdicts, so it stays off the hot paths.

namespace detail {

class MpReal {
 public:
  explicit MpReal(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~MpReal() { mpfr_clear(v_); }
  MpReal(const MpReal&) = delete;
  MpReal& operator=(const MpReal&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

inline void mp_set_rational(MpReal& out, const Rational& r, mpfr_rnd_t rnd) {
  mpfr_set_si(out.get(), r.num, rnd);
  mpfr_div_si(out.get(), out.get(), r.den, rnd);
}

// Writes a directed enclosure of f over [x_lo, x_hi] into f_lo/f_hi.  All
// factors of f are positive, so each side is a product of directed factors;
// the power term takes the extreme over the four (u, b) corners.
inline void mp_f_enclosure_raw(const ChebyshevBound& bd, double x_lo, double x_hi,
                               mpfr_prec_t prec, MpReal& f_lo, MpReal& f_hi) {
  if (!(x_lo > 1.0) || !(x_hi >= x_lo))
    throw std::domain_error("mp_f_enclosure: requires 1 < x_lo <= x_hi");
  MpReal u_lo(prec), u_hi(prec), t(prec), coef(prec), corner(prec), pw(prec);

  mpfr_set_d(u_lo.get(), x_lo, MPFR_RNDZ);  // doubles are exact here
  mpfr_log(u_lo.get(), u_lo.get(), MPFR_RNDD);
  mpfr_set_d(u_hi.get(), x_hi, MPFR_RNDZ);
  mpfr_log(u_hi.get(), u_hi.get(), MPFR_RNDU);
  if (mpfr_sgn(u_lo.get()) <= 0)
    throw std::domain_error("mp_f_enclosure: ln enclosure not positive");

  auto one_side = [&](bool lower, mpfr_ptr f) {
    const mpfr_rnd_t in = lower ? MPFR_RNDD : MPFR_RNDU;    // rounding toward the result side
    const mpfr_rnd_t anti = lower ? MPFR_RNDU : MPFR_RNDD;  // rounding for opposing factors

    // exp(-c sqrt(u)) is minimized at u_hi with c rounded up, and conversely.
    mpfr_sqrt(t.get(), lower ? u_hi.get() : u_lo.get(), anti);
    mp_set_rational(coef, bd.c_exact, anti);
    mpfr_mul(t.get(), t.get(), coef.get(), anti);
    mpfr_neg(t.get(), t.get(), in);
    mpfr_exp(f, t.get(), in);

    mp_set_rational(coef, bd.a_exact, in);
    mpfr_mul(f, f, coef.get(), in);

    if (!bd.b_is_zero()) {
      bool first = true;
      for (mpfr_srcptr u : {static_cast<mpfr_srcptr>(u_lo.get()),
                            static_cast<mpfr_srcptr>(u_hi.get())})
        for (const mpfr_rnd_t brnd : {MPFR_RNDD, MPFR_RNDU}) {
          mp_set_rational(coef, bd.b_exact, brnd);
          mpfr_pow(pw.get(), u, coef.get(), in);
          const bool take = first || (lower ? mpfr_cmp(pw.get(), corner.get()) < 0
                                            : mpfr_cmp(pw.get(), corner.get()) > 0);
          if (take) mpfr_set(corner.get(), pw.get(), MPFR_RNDN);
          first = false;
        }
      mpfr_mul(f, f, corner.get(), in);
    }
  };
  one_side(true, f_lo.get());
  one_side(false, f_hi.get());
}

}  // namespace detail

inline constexpr mpfr_prec_t kEscalationPrec = 192;

// Enclosure of f over [x_lo, x_hi], endpoints rounded outward to double.
inline Interval mp_f_enclosure(const ChebyshevBound& bd, double x_lo, double x_hi,
                               mpfr_prec_t prec = kEscalationPrec) {
  detail::MpReal f_lo(prec), f_hi(prec);
  detail::mp_f_enclosure_raw(bd, x_lo, x_hi, prec, f_lo, f_hi);
  const double lo = mpfr_get_d(f_lo.get(), MPFR_RNDD);
  const double hi = mpfr_get_d(f_hi.get(), MPFR_RNDU);
  return Interval(lo < 0.0 ? 0.0 : lo, hi);
}

// Gap-bound enclosure at p re-derived entirely at MPFR precision.
inline Interval mp_gap_bound(const ChebyshevBound& bd, GapBoundForm form, double p,
                             mpfr_prec_t prec = kEscalationPrec) {
  detail::MpReal f_lo(prec), f_hi(prec);
  detail::mp_f_enclosure_raw(bd, p, p, prec, f_lo, f_hi);
  detail::MpReal lo(prec), hi(prec), den(prec);
  if (form == GapBoundForm::Linear) {
    mpfr_mul_ui(lo.get(), f_lo.get(), 3, MPFR_RNDD);
    mpfr_mul_ui(hi.get(), f_hi.get(), 3, MPFR_RNDU);
  } else {
    if (mpfr_cmp_ui(f_hi.get(), 1) >= 0)
      throw std::domain_error("ratio form: f enclosure reaches 1 at this point");
    // 2f/(1-f) is increasing in f, so the endpoints map directly.
    mpfr_ui_sub(den.get(), 1, f_lo.get(), MPFR_RNDU);
    mpfr_mul_ui(lo.get(), f_lo.get(), 2, MPFR_RNDD);
    mpfr_div(lo.get(), lo.get(), den.get(), MPFR_RNDD);
    mpfr_ui_sub(den.get(), 1, f_hi.get(), MPFR_RNDD);
    mpfr_mul_ui(hi.get(), f_hi.get(), 2, MPFR_RNDU);
    mpfr_div(hi.get(), hi.get(), den.get(), MPFR_RNDU);
  }
  const double dlo = mpfr_get_d(lo.get(), MPFR_RNDD);
  const double dhi = mpfr_get_d(hi.get(), MPFR_RNDU);
  return Interval(dlo < 0.0 ? 0.0 : dlo, dhi);
}

}  // namespace gapbounds
