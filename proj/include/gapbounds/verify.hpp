#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapbounds/bounds.hpp"
#include "gapbounds/checkpoint.hpp"
#include "gapbounds/highprec.hpp"
#include "gapbounds/interval.hpp"
#include "gapbounds/sieve.hpp"

namespace gapbounds {

struct VerifyOptions {
  bool precision_escalation = true;
  std::string checkpoint_path;  // theta scans only; empty disables checkpointing
};

// Rigorous trivalent verdict for one prime gap: True iff the exact rational
// g/p lies strictly below the bound enclosure, False iff it reaches or
// exceeds it.  An overlapping enclosure is retried once at higher precision
// before Unknown is allowed to escape.
inline Ternary check_gap_bound(const ChebyshevBound& bd, GapBoundForm form,
                               const PrimeGapRecord& rec, const VerifyOptions& opts = {}) {
  if (rec.p < 2 || rec.next <= rec.p)
    throw std::invalid_argument("check_gap_bound: malformed gap record");
  const Interval bv = gap_bound_value(bd, form, static_cast<double>(rec.p));
  const std::uint64_t g = rec.gap();
  if (cmp_ratio(g, rec.p, bv.lo) < 0) return Ternary::True;
  if (cmp_ratio(g, rec.p, bv.hi) >= 0) return Ternary::False;
  if (opts.precision_escalation) {
    const Interval rv = mp_gap_bound(bd, form, static_cast<double>(rec.p));
    if (cmp_ratio(g, rec.p, rv.lo) < 0) return Ternary::True;
    if (cmp_ratio(g, rec.p, rv.hi) >= 0) return Ternary::False;
  }
  return Ternary::Unknown;
}

struct GapViolation {
  PrimeGapRecord rec;
  Interval bound_value;
};

// A theta-scan finding on the constancy interval starting at prime p.
struct ThetaFinding {
  std::uint64_t p = 0;          // theta is constant on [p, right_end)
  std::uint64_t right_end = 0;  // next prime, or scan end for the last interval
  double witness_x = 0.0;       // point where the violation is certified
  Interval deviation;           // enclosure-derived |theta - x| bound at issue
  Interval allowance;           // enclosure of x*f(x) there
};

struct VerificationReport {
  std::string label;
  std::string form;  // "ratio" | "linear" | "theta"
  std::uint64_t lo = 0, hi = 0;
  std::vector<GapViolation> violations;
  std::vector<PrimeGapRecord> inconclusive;
  std::vector<ThetaFinding> theta_violations;
  std::vector<ThetaFinding> theta_inconclusive;
  std::optional<std::uint64_t> x_double_star;
  bool x_double_star_caveat = false;  // inconclusive records were present
  std::uint64_t records_checked = 0;
  std::uint64_t resumed_from = 0;  // first point actually scanned after a checkpoint resume
  Interval theta_at_end;           // theta scans only
  PrimeGapRecord max_rel_gap;      // record maximizing g/p over the scan
  double seconds = 0.0;

  bool clean() const {
    return violations.empty() && inconclusive.empty() && theta_violations.empty() &&
           theta_inconclusive.empty();
  }
};

// Exact comparison of relative gaps: a.gap/a.p > b.gap/b.p.
inline bool rel_gap_greater(const PrimeGapRecord& a, const PrimeGapRecord& b) {
  return static_cast<unsigned __int128>(a.gap()) * b.p >
         static_cast<unsigned __int128>(b.gap()) * a.p;
}

// Checks one gap-bound form against every prime gap with p in [lo, hi].
inline VerificationReport scan_gap_bounds(const ChebyshevBound& bd, GapBoundForm form,
                                          std::uint64_t lo, std::uint64_t hi,
                                          const SegmentedSieve& sv, const VerifyOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.label = bd.label;
  rep.form = form_name(form);
  rep.lo = lo;
  rep.hi = hi;
  sv.for_each_gap(lo, hi, [&](const PrimeGapRecord& rec) {
    ++rep.records_checked;
    if (rep.max_rel_gap.p == 0 || rel_gap_greater(rec, rep.max_rel_gap)) rep.max_rel_gap = rec;
    switch (check_gap_bound(bd, form, rec, opts)) {
      case Ternary::True:
        break;
      case Ternary::False:
        rep.violations.push_back({rec, gap_bound_value(bd, form, static_cast<double>(rec.p))});
        break;
      case Ternary::Unknown:
        rep.inconclusive.push_back(rec);
        break;
    }
  });
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

struct XDoubleStarResult {
  bool infeasible = false;  // x_star exceeds the sieve ceiling; nothing was scanned
  std::uint64_t value = 0;
  bool caveat = false;  // inconclusive records encountered; value carries that caveat
  VerificationReport report;
};

// Smallest integer t such that the chosen gap-bound form holds for every
// prime gap with t <= p < x_star; the bound is already established from
// x_star on.  Computed by scanning all records below x_star: t is the
// successor prime of the largest violator, or 2 when the scan is clean.
inline XDoubleStarResult find_x_double_star(const ChebyshevBound& bd, GapBoundForm form,
                                            const SegmentedSieve& sv,
                                            const VerifyOptions& opts = {}) {
  const DerivedThresholds d = derive_thresholds(bd);
  XDoubleStarResult out;
  out.report.label = bd.label;
  out.report.form = form_name(form);
  if (!d.x_star.fits(sv.n_max())) {
    out.infeasible = true;
    return out;
  }
  const std::uint64_t xs =
      d.x_star.is_exp ? static_cast<std::uint64_t>(std::ceil(std::exp(d.x_star.exp_k)))
                      : d.x_star.n;
  if (xs <= 2) {
    out.value = 2;
    out.report.lo = 2;
    out.report.hi = 2;
    out.report.x_double_star = 2;
    return out;
  }
  out.report = scan_gap_bounds(bd, form, 2, xs - 1, sv, opts);
  out.caveat = !out.report.inconclusive.empty();
  out.value = out.report.violations.empty() ? 2 : out.report.violations.back().rec.next;
  out.report.x_double_star = out.value;
  out.report.x_double_star_caveat = out.caveat;
  return out;
}

// Attaches the x_** implied by a finished gap scan when the scan actually
// covers [2, x_star).
inline void attach_x_double_star(VerificationReport& rep, const ChebyshevBound& bd) {
  if (rep.lo > 2) return;
  const DerivedThresholds d = derive_thresholds(bd);
  if (d.x_star.is_exp || rep.hi + 1 < d.x_star.n) return;
  rep.x_double_star = rep.violations.empty() ? 2 : rep.violations.back().rec.next;
  rep.x_double_star_caveat = !rep.inconclusive.empty();
}

// Record maximizing g/p with p in [lo, hi]; ties keep the smaller p.
inline PrimeGapRecord scan_max_relative_gap(std::uint64_t lo, std::uint64_t hi,
                                            const SegmentedSieve& sv) {
  PrimeGapRecord best{};
  sv.for_each_gap(lo, hi, [&](const PrimeGapRecord& rec) {
    if (best.p == 0 || rel_gap_greater(rec, best)) best = rec;
  });
  if (best.p == 0) throw std::invalid_argument("scan_max_relative_gap: no prime in range");
  return best;
}

namespace detail {

// Rigorous lower bound for |theta - x| at the point x.
inline double abs_dev_lower(const Interval& th, double x) {
  if (th.hi < x) return std::fmax(0.0, next_down(x - th.hi));
  if (th.lo > x) return std::fmax(0.0, next_down(th.lo - x));
  return 0.0;
}

// Rigorous upper bound for sup of |theta - x| over x in [xl, xr].
inline double abs_dev_upper(const Interval& th, double xl, double xr) {
  return std::fmax(std::fmax(next_up(th.hi - xl), next_up(xr - th.lo)), 0.0);
}

enum class IntervalOutcome { Verified, Violated, Inconclusive };

struct IntervalCheck {
  IntervalOutcome outcome = IntervalOutcome::Inconclusive;
  double witness = 0.0;
  Interval deviation{};
  Interval allowance{};
};

// Decides |theta - x| < x f(x) for all x in [xl, xr_open) (or the closed
// interval when right_closed), where theta is constant and enclosed by th.
//
// Tier 1 compares the deviation sup against xl*f(xl), valid when x*f(x) is
// nondecreasing over the scan (cert).  On failure an adaptive bisection
// bounds x*f(x) from below on each subinterval via its interval extension,
// which needs no monotonicity assumption; a rigorous violation certificate
// is searched at subinterval endpoints.  Precision escalation re-derives f
// over unsplittable subintervals with MPFR before giving up.
inline IntervalCheck check_theta_interval(const ChebyshevBound& bd, const Interval& th,
                                          double xl, double xr, bool right_closed, bool cert,
                                          bool escalate) {
  IntervalCheck res;
  if (cert) {
    const double dev_up = abs_dev_upper(th, xl, xr);
    const Interval rhs = Interval(xl) * f_eval(bd, xl);
    if (dev_up < rhs.lo) {
      res.outcome = IntervalOutcome::Verified;
      return res;
    }
  }
  struct Node {
    double a, b;
  };
  std::vector<Node> todo{{xl, xr}};
  int budget = 65536;
  auto probe = [&](double x) -> bool {
    const double dev_lo = abs_dev_lower(th, x);
    const Interval allow = Interval(x) * f_eval(bd, x);
    if (dev_lo >= allow.hi) {
      res.outcome = IntervalOutcome::Violated;
      res.witness = x;
      res.deviation = Interval(dev_lo);
      res.allowance = allow;
      return true;
    }
    return false;
  };
  // Prefer integer witnesses on short intervals; non-integer violations
  // (typically hugging the open right end) are still caught below.
  if (xr - xl <= 64.0) {
    for (double x = std::ceil(xl); x < xr || (right_closed && x == xr); x += 1.0)
      if (probe(x)) return res;
  }
  while (!todo.empty()) {
    if (--budget < 0) {
      res.outcome = IntervalOutcome::Inconclusive;
      res.witness = xl;
      return res;
    }
    const Node nd = todo.back();
    todo.pop_back();
    const Interval X(nd.a, nd.b);
    const double dev_up = abs_dev_upper(th, nd.a, nd.b);
    Interval rhs = X * f_eval(bd, X);
    if (dev_up < rhs.lo) continue;
    // Probe interval endpoints for a rigorous counterexample; the right
    // probe stays strictly inside an open right end.
    const double right_in = (nd.b < xr || right_closed) ? nd.b : next_down(nd.b);
    if (probe(nd.a)) return res;
    if (right_in > nd.a && probe(right_in)) return res;
    const double m = 0.5 * (nd.a + nd.b);
    if (m > nd.a && m < nd.b) {
      todo.push_back({m, nd.b});
      todo.push_back({nd.a, m});
      continue;
    }
    // Unsplittable at double resolution: one precision-escalated recheck.
    if (escalate) {
      const Interval fx = mp_f_enclosure(bd, nd.a, nd.b);
      rhs = X * fx;
      if (dev_up < rhs.lo) continue;
    }
    res.outcome = IntervalOutcome::Inconclusive;
    res.witness = nd.a;
    res.deviation = Interval(abs_dev_lower(th, nd.a), dev_up);
    res.allowance = rhs;
    return res;
  }
  res.outcome = IntervalOutcome::Verified;
  return res;
}

}  // namespace detail

// Verifies |theta(x) - x| < x f(x) for every real x in [lo, hi].  Theta is
// accumulated from scratch (or from a checkpoint), and each maximal
// interval of constancy [p, q) intersecting [lo, hi] is decided by
// detail::check_theta_interval.  Sufficient checks that fail without a
// rigorous counterexample land in theta_inconclusive; nothing Unknown is
// ever counted as verified.
inline VerificationReport verify_theta_bound(const ChebyshevBound& bd, std::uint64_t lo,
                                             std::uint64_t hi, const SegmentedSieve& sv,
                                             const VerifyOptions& opts = {}) {
  if (lo < 2) throw std::out_of_range("verify_theta_bound: lo must be >= 2");
  if (hi < lo) throw std::out_of_range("verify_theta_bound: hi must be >= lo");
  if (hi > sv.n_max()) throw std::out_of_range("verify_theta_bound: hi exceeds n_max");

  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.label = bd.label;
  rep.form = "theta";
  rep.lo = lo;
  rep.hi = hi;

  // x*f(x) monotonicity certificate over the whole scan range.
  bool cert = false;
  {
    const Interval u_hull = iv_log(Interval(2.0, static_cast<double>(hi)));
    cert = xf_nondecreasing_margin(bd, u_hull).lo > 0.0;
  }

  ThetaAccumulator acc;
  std::uint64_t start = 2;

  ThetaCheckpointHeader header;
  header.lo = lo;
  header.hi = hi;
  header.n_max = sv.n_max();
  header.segment_size = sv.segment_size();
  header.label = bd.label;
  const bool use_ck = !opts.checkpoint_path.empty();
  if (use_ck) {
    if (auto ck = checkpoint_read(opts.checkpoint_path)) {
      if (!(ck->first == header))
        throw std::invalid_argument("checkpoint '" + opts.checkpoint_path +
                                    "' belongs to a different run");
      if (!ck->second.empty()) {
        const ThetaSegmentRecord& last = ck->second.back();
        acc = ThetaAccumulator::restore(last.seg_hi, last.prime_count, last.theta_lo,
                                        last.theta_hi);
        if (last.maxrel_p != 0)
          rep.max_rel_gap = PrimeGapRecord{last.maxrel_p, last.maxrel_p + last.maxrel_gap};
        start = last.seg_hi + 1;
        rep.resumed_from = start;
      }
    } else {
      checkpoint_create(opts.checkpoint_path, header);
    }
  }

  std::uint64_t prev = 0;
  Interval th_prev;
  if (start > 2) {
    prev = sv.prev_prime(start - 1);
    th_prev = acc.theta();
  }

  auto handle_interval = [&](std::uint64_t p_left, const Interval& th, double xr,
                             bool right_closed) {
    const std::uint64_t right_id = right_closed ? hi : static_cast<std::uint64_t>(xr);
    const double xl = std::max(static_cast<double>(p_left), static_cast<double>(lo));
    if (xl > xr) return;
    ++rep.records_checked;
    const detail::IntervalCheck c = detail::check_theta_interval(
        bd, th, xl, xr, right_closed, cert, opts.precision_escalation);
    if (c.outcome == detail::IntervalOutcome::Verified) return;
    ThetaFinding f;
    f.p = p_left;
    f.right_end = right_id;
    f.witness_x = c.witness;
    f.deviation = c.deviation;
    f.allowance = c.allowance;
    if (c.outcome == detail::IntervalOutcome::Violated)
      rep.theta_violations.push_back(f);
    else
      rep.theta_inconclusive.push_back(f);
  };

  for (std::uint64_t seg = start; seg <= hi; seg += sv.segment_size()) {
    const std::uint64_t seg_hi = std::min(hi, seg + sv.segment_size() - 1);
    sv.for_each_prime(std::max<std::uint64_t>(seg, 2), seg_hi, [&](std::uint64_t p) {
      if (prev >= 2) {
        const PrimeGapRecord rec{prev, p};
        if (rep.max_rel_gap.p == 0 || rel_gap_greater(rec, rep.max_rel_gap))
          rep.max_rel_gap = rec;
        if (static_cast<double>(p) > static_cast<double>(lo))
          handle_interval(prev, th_prev, static_cast<double>(p), false);
      }
      acc.add_prime(p);
      th_prev = acc.theta();
      prev = p;
    });
    acc.advance_to(seg_hi);
    if (use_ck) {
      const Interval th = acc.theta();
      ThetaSegmentRecord r;
      r.seg_lo = seg;
      r.seg_hi = seg_hi;
      r.prime_count = acc.count();
      r.theta_lo = th.lo;
      r.theta_hi = th.hi;
      r.maxrel_p = rep.max_rel_gap.p;
      r.maxrel_gap = rep.max_rel_gap.p != 0 ? rep.max_rel_gap.gap() : 0;
      checkpoint_append(opts.checkpoint_path, r);
    }
    if (seg_hi == hi) break;
  }

  // Final stretch [prev, hi]: theta is constant there since no prime lies
  // in (prev, hi].
  if (prev >= 2 && prev <= hi) handle_interval(prev, th_prev, static_cast<double>(hi), true);

  rep.theta_at_end = acc.theta();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace gapbounds
