#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gapbounds/interval.hpp"

namespace gapbounds {

// Consecutive primes p < next with no prime between them.
struct PrimeGapRecord {
  std::uint64_t p = 0;
  std::uint64_t next = 0;
  std::uint64_t gap() const { return next - p; }
  friend bool operator==(const PrimeGapRecord&, const PrimeGapRecord&) = default;
};

namespace detail {
inline std::uint64_t isqrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}
}  // namespace detail

// Segmented sieve of Eratosthenes with an odd-only bitset.  Base primes up
// to sqrt(n_max) are precomputed once, so memory stays O(sqrt(n_max) +
// segment) regardless of the scan length.  All scan methods are const and
// allocate their working buffers locally: disjoint ranges can be processed
// by any number of threads concurrently.
class SegmentedSieve {
 public:
  static constexpr std::uint64_t kDefaultNMax = 1'000'000'000;
  static constexpr std::uint64_t kDefaultSegmentSize = std::uint64_t(1) << 22;
  // Room past n_max so the gap record of the last prime <= n_max can close.
  // Far larger than any prime gap in the 64-bit range.
  static constexpr std::uint64_t kLookahead = 4096;

  explicit SegmentedSieve(std::uint64_t n_max = kDefaultNMax,
                          std::uint64_t segment_size = kDefaultSegmentSize)
      : n_max_(n_max), segment_size_(segment_size) {
    if (n_max_ < 100) throw std::invalid_argument("SegmentedSieve: n_max must be >= 100");
    if (n_max_ > (std::uint64_t(1) << 62))
      throw std::invalid_argument("SegmentedSieve: n_max too large");
    if (segment_size_ == 0 || segment_size_ % 128 != 0)
      throw std::invalid_argument("SegmentedSieve: segment_size must be a positive multiple of 128");
    build_base();
  }

  std::uint64_t n_max() const { return n_max_; }
  std::uint64_t segment_size() const { return segment_size_; }

  // Primes in [lo, hi], ascending.  The span is capped by segment_size;
  // use for_each_prime for unbounded ranges.
  std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) const {
    check_range(lo, hi);
    if (hi - lo + 1 > segment_size_)
      throw std::invalid_argument("primes_in: range longer than one segment");
    std::vector<std::uint64_t> out;
    std::vector<std::uint64_t> bits;
    scan(lo, hi, bits, [&](std::uint64_t p) {
      out.push_back(p);
      return true;
    });
    return out;
  }

  template <class F>
  void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& fn) const {
    check_range(lo, hi);
    std::vector<std::uint64_t> bits;
    for (std::uint64_t seg = lo; seg <= hi; seg += segment_size_) {
      const std::uint64_t end = std::min(hi, seg + segment_size_ - 1);
      scan(seg, end, bits, [&](std::uint64_t p) {
        fn(p);
        return true;
      });
      if (end == hi) break;  // avoid overflow of seg near UINT64_MAX
    }
  }

  // One record per prime p in [lo, hi]; looks past hi (and, at the very
  // top, past n_max) for the prime that closes the final record.
  template <class F>
  void for_each_gap(std::uint64_t lo, std::uint64_t hi, F&& fn) const {
    check_range(lo, hi);
    const std::uint64_t scan_hi = hi + kLookahead;  // hi <= n_max, no overflow
    std::uint64_t prev = 0;
    bool done = false;
    std::vector<std::uint64_t> bits;
    for (std::uint64_t seg = lo; seg <= scan_hi && !done; seg += segment_size_) {
      const std::uint64_t end = std::min(scan_hi, seg + segment_size_ - 1);
      scan(seg, end, bits, [&](std::uint64_t p) {
        if (prev >= lo && prev <= hi) fn(PrimeGapRecord{prev, p});
        prev = p;
        if (prev > hi) {
          done = true;
          return false;
        }
        return true;
      });
      if (end == scan_hi) break;
    }
    if (!done && prev >= lo && prev <= hi)
      throw std::runtime_error("for_each_gap: no closing prime within lookahead window");
  }

  std::uint64_t next_prime_after(std::uint64_t n) const {
    const std::uint64_t limit = n_max_ + kLookahead;
    std::uint64_t lo = std::max<std::uint64_t>(2, n + 1);
    std::vector<std::uint64_t> bits;
    std::uint64_t found = 0;
    for (std::uint64_t seg = lo; seg <= limit && found == 0; seg += 512) {
      const std::uint64_t end = std::min(limit, seg + 511);
      scan(seg, end, bits, [&](std::uint64_t p) {
        found = p;
        return false;
      });
      if (end == limit) break;
    }
    if (found == 0) throw std::runtime_error("next_prime_after: exceeded lookahead window");
    return found;
  }

  // Largest prime <= n.
  std::uint64_t prev_prime(std::uint64_t n) const {
    if (n < 2) throw std::domain_error("prev_prime: no prime <= n");
    std::vector<std::uint64_t> bits;
    std::uint64_t hi = std::min(n, n_max_ + kLookahead);
    while (true) {
      const std::uint64_t lo = hi >= 513 ? hi - 511 : 2;
      std::uint64_t found = 0;
      scan(lo, hi, bits, [&](std::uint64_t p) {
        found = p;
        return true;
      });
      if (found != 0) return found;
      if (lo == 2) throw std::runtime_error("prev_prime: none found");
      hi = lo - 1;
    }
  }

  std::uint64_t count_primes(std::uint64_t lo, std::uint64_t hi) const {
    std::uint64_t n = 0;
    for_each_prime(lo, hi, [&](std::uint64_t) { ++n; });
    return n;
  }

 private:
  std::uint64_t n_max_;
  std::uint64_t segment_size_;
  std::vector<std::uint32_t> base_;  // odd base primes

  void check_range(std::uint64_t lo, std::uint64_t hi) const {
    if (lo < 2) throw std::out_of_range("sieve range: lo must be >= 2");
    if (lo > hi) throw std::out_of_range("sieve range: lo must be <= hi");
    if (hi > n_max_) throw std::out_of_range("sieve range: hi exceeds configured n_max");
  }

  void build_base() {
    const std::uint64_t b = detail::isqrt_u64(n_max_ + kLookahead) + 1;
    std::vector<char> is_comp(b + 1, 0);
    for (std::uint64_t i = 3; i * i <= b; i += 2)
      if (!is_comp[i])
        for (std::uint64_t j = i * i; j <= b; j += 2 * i) is_comp[j] = 1;
    for (std::uint64_t i = 3; i <= b; i += 2)
      if (!is_comp[i]) base_.push_back(static_cast<std::uint32_t>(i));
  }

  // Emits primes in [lo, hi] ascending; fn returns false to stop early.
  // Returns false iff stopped.  `bits` is caller-provided scratch.
  template <class F>
  bool scan(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& bits, F&& fn) const {
    if (lo <= 2 && 2 <= hi) {
      if (!fn(std::uint64_t(2))) return false;
    }
    const std::uint64_t first = std::max<std::uint64_t>(lo, 3) | 1;
    if (first > hi) return true;
    const std::uint64_t slots = (hi - first) / 2 + 1;
    bits.assign((slots + 63) / 64, 0);
    for (const std::uint32_t bp : base_) {
      const std::uint64_t p = bp;
      if (p * p > hi) break;
      std::uint64_t start = ((first + p - 1) / p) * p;
      if (start < p * p) start = p * p;
      if ((start & 1) == 0) start += p;
      for (std::uint64_t m = start; m <= hi; m += 2 * p) bits[(m - first) >> 7] |= std::uint64_t(1) << (((m - first) >> 1) & 63);
    }
    for (std::uint64_t i = 0; i < slots; ++i) {
      if (bits[i >> 6] & (std::uint64_t(1) << (i & 63))) continue;
      if (!fn(first + 2 * i)) return false;
    }
    return true;
  }
};

// Error-free transformation: s + e == a + b exactly.
struct TwoSum {
  double s, e;
};
inline TwoSum two_sum(double a, double b) {
  const double s = a + b;
  const double bv = s - a;
  const double e = (a - (s - bv)) + (b - bv);
  return {s, e};
}

// Rigorous enclosure of theta(x) = sum of ln p over primes p <= x.
// Midpoints are accumulated with a compensated (carry-preserving) sum while
// a separate nonnegative budget collects every rounding contribution:
// 2 ulp per ln p evaluation, 1 ulp of the carry per compensation add, and
// the final recombination rounding.  The enclosure therefore always
// contains the exact theta value.
class ThetaAccumulator {
 public:
  std::uint64_t upto() const { return upto_; }
  std::uint64_t count() const { return count_; }

  void add_prime(std::uint64_t p) {
    if (p <= upto_) throw std::logic_error("ThetaAccumulator: primes must arrive ascending");
    const double t = std::log(static_cast<double>(p));
    err_ += 2.0 * (next_up(t) - t);
    const TwoSum ts = two_sum(sum_, t);
    sum_ = ts.s;
    comp_ += ts.e;
    const double ac = std::fabs(comp_);
    err_ += next_up(ac) - ac;
    ++count_;
    upto_ = p;
  }

  // Marks coverage through x; the caller asserts there is no prime in
  // (upto, x].
  void advance_to(std::uint64_t x) {
    if (x > upto_) upto_ = x;
  }

  void extend(const SegmentedSieve& sv, std::uint64_t new_upto) {
    if (new_upto < upto_) throw std::invalid_argument("ThetaAccumulator: cannot extend backwards");
    if (new_upto == upto_) return;
    sv.for_each_prime(std::max<std::uint64_t>(2, upto_ + 1), new_upto,
                      [this](std::uint64_t p) { add_prime(p); });
    upto_ = new_upto;
  }

  Interval theta() const {
    const double s = sum_ + comp_;
    const double as = std::fabs(s);
    const double slack =
        err_ * (1.0 + 2.3e-16 * static_cast<double>(count_ + 2)) + (next_up(as) - as);
    return Interval(next_down(s - slack), next_up(s + slack));
  }

  static ThetaAccumulator restore(std::uint64_t upto, std::uint64_t count, double theta_lo,
                                  double theta_hi) {
    if (theta_lo > theta_hi) throw std::invalid_argument("ThetaAccumulator: bad enclosure");
    ThetaAccumulator acc;
    acc.upto_ = upto;
    acc.count_ = count;
    acc.sum_ = 0.5 * (theta_lo + theta_hi);
    acc.comp_ = 0.0;
    acc.err_ = next_up(std::fmax(acc.sum_ - theta_lo, theta_hi - acc.sum_));
    return acc;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double err_ = 0.0;
  std::uint64_t upto_ = 1;
  std::uint64_t count_ = 0;
};

}  // namespace gapbounds
