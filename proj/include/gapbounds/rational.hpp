#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gapbounds/interval.hpp"

namespace gapbounds {

// Exact rational coefficient.  Every parameter in the bound datasets is
// either an integer, a fraction "p/q", or a decimal "d.ddd", all of which
// are exact rationals; keeping them exact lets precision escalation and
// the test oracles work from the true value instead of a rounded double.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num > kMaxExact || -num > kMaxExact || den > kMaxExact)
      throw std::invalid_argument("Rational: magnitude exceeds exact double range");
  }

  static constexpr long long kMaxExact = 1LL << 53;

  bool is_zero() const { return num == 0; }
  bool is_integer() const { return den == 1; }
  bool positive() const { return num > 0; }
  bool negative() const { return num < 0; }

  Interval enclosure() const { return Interval::from_ratio(num, den); }
  double approx() const { return static_cast<double>(num) / static_cast<double>(den); }

  Rational times(long long k) const { return Rational(num * k, den); }

  std::string str() const {
    return is_integer() ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
};

// Accepts "295", "-3", "1/4", "0.2196138920", "9.40".
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty input");
  const std::string s(text);
  std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    const long long n = std::stoll(s.substr(0, slash));
    const long long d = std::stoll(s.substr(slash + 1));
    return Rational(n, d);
  }
  std::size_t dot = s.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(s), 1);
  const std::string frac = s.substr(dot + 1);
  if (frac.empty() || frac.size() > 17)
    throw std::invalid_argument("parse_rational: bad decimal '" + s + "'");
  for (char ch : frac)
    if (ch < '0' || ch > '9') throw std::invalid_argument("parse_rational: bad decimal '" + s + "'");
  long long den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::string ip = s.substr(0, dot);
  const bool neg = !ip.empty() && ip[0] == '-';
  const long long whole = (ip.empty() || ip == "-" || ip == "+") ? 0 : std::stoll(ip);
  long long n = (neg ? -whole : whole) * den + std::stoll(frac);
  if (neg) n = -n;
  return Rational(n, den);
}

// A validity threshold.  Table entries are either ordinary integers or of
// the form exp(k) with k far beyond the range of any sieve, so the value is
// kept symbolically in the latter case.
struct Threshold {
  std::uint64_t n = 0;   // valid when !is_exp
  double exp_k = 0.0;    // valid when is_exp: value is e^exp_k
  bool is_exp = false;

  static Threshold exact(std::uint64_t v) {
    Threshold t;
    t.n = v;
    return t;
  }
  static Threshold exp_of(double k) {
    if (!(k >= 0.0) || !std::isfinite(k))
      throw std::invalid_argument("Threshold: exp() argument must be finite and >= 0");
    Threshold t;
    t.is_exp = true;
    t.exp_k = k;
    return t;
  }

  // Natural log of the threshold value; exact-to-double comparisons between
  // exact and exp forms only arise with exp_k >= 3000, so well clear of any
  // representable integer's log.
  double log_value() const { return is_exp ? exp_k : std::log(static_cast<double>(n)); }

  bool fits(std::uint64_t limit) const {
    if (!is_exp) return n <= limit;
    if (exp_k >= 64.0 * 0.6931471805599453) return false;
    return static_cast<std::uint64_t>(std::ceil(std::exp(exp_k))) <= limit;
  }

  std::string str() const {
    if (!is_exp) return std::to_string(n);
    char buf[48];
    if (exp_k == std::floor(exp_k) && std::fabs(exp_k) < 1e15)
      std::snprintf(buf, sizeof buf, "exp(%.0f)", exp_k);
    else
      std::snprintf(buf, sizeof buf, "exp(%.17g)", exp_k);
    return buf;
  }

  friend Threshold max(const Threshold& a, const Threshold& b) {
    if (!a.is_exp && !b.is_exp) return a.n >= b.n ? a : b;
    return a.log_value() >= b.log_value() ? a : b;
  }

  friend bool operator==(const Threshold&, const Threshold&) = default;
};

inline Threshold parse_threshold(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("parse_threshold: empty input");
  const std::string s(text);
  if (s.rfind("exp(", 0) == 0 && s.back() == ')') {
    const std::string inner = s.substr(4, s.size() - 5);
    std::size_t pos = 0;
    const double k = std::stod(inner, &pos);
    if (pos != inner.size())
      throw std::invalid_argument("parse_threshold: bad exponent '" + inner + "'");
    return Threshold::exp_of(k);
  }
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("parse_threshold: bad integer '" + s + "'");
  return Threshold::exact(v);
}

}  // namespace gapbounds
