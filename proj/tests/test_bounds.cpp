#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gapbounds/bounds.hpp"
#include "gapbounds/dataset.hpp"
#include "gapbounds/highprec.hpp"
#include "oracle.hpp"

using namespace gapbounds;

namespace {
ChebyshevBound make(const char* a, const char* b, const char* c, const char* x0,
                    const char* label = "test") {
  return ChebyshevBound(parse_rational(a), parse_rational(b), parse_rational(c),
                        parse_threshold(x0), label);
}
}  // namespace

TEST_CASE("construction rejects invalid parameters") {
  CHECK_THROWS_AS(make("0", "0", "1/4", "2"), std::invalid_argument);
  CHECK_THROWS_AS(make("-1", "0", "1/4", "2"), std::invalid_argument);
  CHECK_THROWS_AS(make("1", "-1/4", "1/4", "2"), std::invalid_argument);
  CHECK_THROWS_AS(make("1", "0", "0", "2"), std::invalid_argument);
  CHECK_THROWS_AS(make("1", "0", "1/4", "1"), std::invalid_argument);
  CHECK_THROWS_AS(make("1", "0", "1/4", "2", ""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("f_eval examples") {
  const auto& ds = builtin_dataset();
  // a=1, b=0, c=1/4 at x=2: exp(-sqrt(ln 2)/4)
  const Interval f2 = f_eval(ds.by_label("visser-1-0-quarter"), 2.0);
  CHECK(oracle::contains(f2, oracle::Big("0.812094429747524010944849893088837221")));

  // ln(e) = 1 collapses power and root: f = exp(-c), checked via the oracle
  // at the double closest to e.
  const double e_dbl = 2.718281828459045;
  const ChebyshevBound unit = make("1", "0", "1", "2");
  CHECK(oracle::contains(f_eval(unit, e_dbl), oracle::f_value(unit, e_dbl)));

  // Peak-height reference value of the f_peak column.
  const Interval fp = f_eval(ds.by_label("fks"), 275108.1632);
  CHECK(oracle::contains(fp, oracle::Big("20.3479443749109099803841680684328354")));
  CHECK(std::fabs(fp.mid() - 20.34794437) < 0.5e-8);

  CHECK_THROWS_AS(f_eval(ds.by_label("fks"), 1.0), std::domain_error);
  CHECK_THROWS_AS(f_eval(ds.by_label("fks"), 0.5), std::domain_error);
}

TEST_CASE("derive_thresholds reproduces reference rows") {
  const auto& ds = builtin_dataset();

  const DerivedThresholds d1 = derive_thresholds(ds.by_label("schoenfeld-relaxed"));
  CHECK(oracle::contains(d1.x_peak, oracle::Big("54.59815003314423907811")));
  CHECK(oracle::contains(d1.f_peak, oracle::Big("0.21444097124017669912")));
  CHECK(d1.x_star == Threshold::exact(55));

  const DerivedThresholds d2 = derive_thresholds(ds.by_label("schoenfeld"));
  CHECK(oracle::contains(d2.x_peak, oracle::Big("11.15042039264632499693")));
  CHECK(oracle::contains(d2.f_peak, oracle::Big("0.1659905476078448329483")));
  CHECK(d2.x_star == Threshold::exact(101));

  const DerivedThresholds d3 = derive_thresholds(ds.by_label("dlvp-885"));
  CHECK(d3.x_peak == Interval(1.0));
  CHECK(d3.f_peak == Interval(295.0));
  CHECK(d3.x_star == Threshold::exact(2));
  CHECK(f_peak_at_most_one(d3) == Ternary::False);

  const DerivedThresholds d4 = derive_thresholds(ds.by_label("johnston-yang"));
  CHECK(oracle::contains(d4.x_peak, oracle::Big("667160.3742565732364834")));
  CHECK(oracle::contains(d4.f_peak, oracle::Big("23.19042579019099647606")));
  CHECK(d4.x_star == Threshold::exact(667161));
}

TEST_CASE("b = 0 collapses the thresholds exactly") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long long> num(1, 999983), den(1, 999983);
  for (int i = 0; i < 200; ++i) {
    const Rational a(num(rng), den(rng));
    const ChebyshevBound bd(a, Rational(0, 1), Rational(1, 3), Threshold::exact(2), "t");
    const DerivedThresholds d = derive_thresholds(bd);
    CHECK(d.x_peak == Interval(1.0));
    CHECK(d.f_peak == bd.a);
    CHECK(d.x_star == bd.x0);
  }
}

TEST_CASE("table-II/III style rows derive x_star = x0 analytically") {
  const auto& ds = builtin_dataset();
  for (const ChebyshevBound* bd : restricted_rows(ds)) {
    const DerivedThresholds d = derive_thresholds(*bd);
    CHECK(d.x_star == bd->x0);
    CHECK(d.x_star.str().rfind("exp(", 0) == 0);
  }
}

TEST_CASE("gap_bound_ratio examples") {
  const auto& ds = builtin_dataset();
  const Interval r11 = gap_bound_ratio(ds.by_label("visser-half-0-third"), 11.0);
  CHECK(oracle::contains(r11, oracle::Big("0.85062948139183895049027081889151413")));

  CHECK(ratio_from_f(Interval(0.5)).contains(2.0));

  const Interval r4 = gap_bound_ratio(ds.by_label("trudgian-relaxed"), 11.0);
  CHECK(oracle::contains(r4, oracle::Big("0.455988054460531508466778059386586379")));
  // ... which exceeds the true relative gap 2/11 at p = 11.
  CHECK(cmp_ratio(2, 11, r4.lo) < 0);

  // f reaching 1 invalidates the form.
  const ChebyshevBound fat = make("2", "0", "1/1000000000000000", "2");
  CHECK_THROWS_AS(gap_bound_ratio(fat, 11.0), std::domain_error);
  CHECK_THROWS_AS(gap_bound_ratio(ds.by_label("visser-half-0-third"), 1.5), std::domain_error);
}

TEST_CASE("gap_bound_linear examples") {
  const auto& ds = builtin_dataset();
  const Interval l2 = gap_bound_linear(ds.by_label("dlvp-885"), 2.0);
  CHECK(oracle::contains(l2, oracle::Big("583.655166101856246932255345262164163")));

  CHECK(linear_coefficient(ds.by_label("dlvp-one-e1e6")) == Rational(4926999, 1));
  CHECK(linear_coefficient(ds.by_label("dlvp-one-e1e6")).enclosure() == Interval(4926999.0));
  CHECK(linear_coefficient(ds.by_label("dlvp-885")) == Rational(885, 1));

  // c -> 0: 3f approaches 3 at ln x = 1.
  const ChebyshevBound tiny = make("1", "0", "1/9007199254740991", "2");
  CHECK(gap_bound_linear(tiny, 2.718281828459045).contains(3.0));

  CHECK_THROWS_AS(gap_bound_linear(ds.by_label("dlvp-885"), 1.0), std::domain_error);
}

TEST_CASE("is_f_monotone_decreasing_at") {
  const auto& ds = builtin_dataset();
  CHECK(is_f_monotone_decreasing_at(ds.by_label("schoenfeld-relaxed"), 60.0));
  CHECK_FALSE(is_f_monotone_decreasing_at(ds.by_label("schoenfeld-relaxed"), 54.0));
  CHECK(is_f_monotone_decreasing_at(ds.by_label("dlvp-885"), 1.5));
  CHECK_FALSE(is_f_monotone_decreasing_at(ds.by_label("fks"), 1000.0));
  CHECK_THROWS_AS(is_f_monotone_decreasing_at(ds.by_label("fks"), 1.0), std::domain_error);
}

TEST_CASE("f decreases beyond x_peak on random pairs") {
  const auto& ds = builtin_dataset();
  std::mt19937_64 rng(31337);
  for (const char* label : {"schoenfeld", "trudgian-relaxed", "fks", "visser-1-0-quarter"}) {
    const ChebyshevBound& bd = ds.by_label(label);
    const double xp = derive_thresholds(bd).x_peak.hi;
    std::uniform_real_distribution<double> u(std::log(xp + 1.0), std::log(1e9));
    for (int i = 0; i < 2000; ++i) {
      double x1 = std::exp(u(rng)), x2 = std::exp(u(rng));
      if (x1 > x2) std::swap(x1, x2);
      const Interval f1 = f_eval(bd, x1), f2 = f_eval(bd, x2);
      REQUIRE(f2.hi <= f1.hi + 2.0 * (f1.width() + f2.width()));
    }
  }
}

TEST_CASE("ratio form lies below linear form while f < 1/3") {
  const auto& ds = builtin_dataset();
  const ChebyshevBound& bd = ds.by_label("schoenfeld");  // f_peak ~ 0.166 < 1/3
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> lx(std::log(2.0), std::log(1e9));
  for (int i = 0; i < 2000; ++i) {
    const double x = std::exp(lx(rng));
    const Interval f = f_eval(bd, x);
    REQUIRE(f.hi < 1.0 / 3.0);
    REQUIRE(gap_bound_ratio(bd, x).hi < gap_bound_linear(bd, x).lo);
  }
  // and crosses above it once f > 1/3
  const ChebyshevBound wide = make("2/5", "0", "1/1000", "2");  // f(2) ~ 0.4
  CHECK(gap_bound_ratio(wide, 2.0).lo > gap_bound_linear(wide, 2.0).hi);
}

TEST_CASE("x*f(x) nondecreasing certificate holds for the dataset") {
  const auto& ds = builtin_dataset();
  const Interval u_hull = iv_log(Interval(2.0, 1e9));
  for (const auto& bd : ds.rows) CHECK(xf_nondecreasing_margin(bd, u_hull).lo > 0.0);
}

TEST_CASE("escalated enclosures are consistent and tighter") {
  const auto& ds = builtin_dataset();
  const ChebyshevBound& bd = ds.by_label("trudgian-relaxed");
  const Interval coarse = f_eval(bd, 11.0);
  const Interval fine = mp_f_enclosure(bd, 11.0, 11.0);
  CHECK(fine.lo >= coarse.lo);
  CHECK(fine.hi <= coarse.hi);
  CHECK(fine.width() < coarse.width());
  CHECK(oracle::contains(fine, oracle::f_value(bd, 11.0)));
  const Interval fine_box = mp_f_enclosure(bd, 11.0, 13.0);
  CHECK(fine_box.lo <= fine.lo);
  CHECK(fine_box.hi >= mp_f_enclosure(bd, 13.0, 13.0).lo);
}
