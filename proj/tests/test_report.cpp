#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "gapbounds/dataset.hpp"
#include "gapbounds/report.hpp"

using namespace gapbounds;

namespace {
const SegmentedSieve& shared_sieve() {
  static const SegmentedSieve sv(2'000'000);
  return sv;
}
}  // namespace

TEST_CASE("ten-significant-digit formatting") {
  CHECK(format_sig10(54.598150033144236) == "54.59815003");
  CHECK(format_sig10(0.21444097124017669) == "0.2144409712");
  CHECK(format_sig10(1.0) == "1");
  CHECK(format_sig10(0.5) == "0.5");
  CHECK(format_sig10(295.0) == "295");
  CHECK(format_sig10(275108.16316821) == "275108.1632");
}

TEST_CASE("log-space scientific rendering") {
  const auto& ds = builtin_dataset();
  const double L = log10_gap_bound(ds.by_label("dlvp-one-e1e6"), GapBoundForm::Linear, 1e6);
  CHECK(format_pow10(L) == "2.500924441e-428");
}

TEST_CASE("both gap tables match their snapshots") {
  const auto& ds = builtin_dataset();
  const auto& sv = shared_sieve();
  const auto iv = build_gap_table(ds, true, sv);
  CHECK(diff_against_snapshot(iv, true).empty());
  const auto v = build_gap_table(ds, false, sv);
  CHECK(diff_against_snapshot(v, false).empty());
  REQUIRE(iv.size() == 11);
  REQUIRE(v.size() == 4);
  CHECK(iv[1].x_peak == "54.59815003");
  CHECK(iv[1].x_double_star == "11");
  CHECK(v[1].x_star == "667161");
}

TEST_CASE("csv output re-parses to the same cells") {
  const auto& ds = builtin_dataset();
  const auto& sv = shared_sieve();
  const auto rows = build_gap_table(ds, true, sv);
  const std::string csv = render_table_csv(rows);
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));  // header
  std::size_t i = 0;
  while (std::getline(in, line)) {
    REQUIRE(i < rows.size());
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(pos));
        break;
      }
      cells.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    REQUIRE(cells.size() == 9);
    const auto want = row_cells(rows[i]);
    for (std::size_t k = 0; k < 9; ++k) CHECK(cells[k] == want[k]);
    ++i;
  }
  CHECK(i == rows.size());
}

TEST_CASE("table rendering is deterministic") {
  const auto& ds = builtin_dataset();
  const auto& sv = shared_sieve();
  const auto rows1 = build_gap_table(ds, false, sv);
  const auto rows2 = build_gap_table(ds, false, sv);
  CHECK(render_table_markdown(rows1) == render_table_markdown(rows2));
  CHECK(render_table_csv(rows1) == render_table_csv(rows2));
  CHECK(table_to_json(rows1).dump() == table_to_json(rows2).dump());
  CHECK(render_table_markdown(rows1).substr(0, 1) == "|");
}

TEST_CASE("verification report JSON carries exact rationals") {
  const auto& ds = builtin_dataset();
  const auto& sv = shared_sieve();
  VerificationReport rep =
      scan_gap_bounds(ds.by_label("trudgian-relaxed"), GapBoundForm::Ratio, 2, 43, sv);
  attach_x_double_star(rep, ds.by_label("trudgian-relaxed"));
  const nlohmann::json j = report_to_json(rep);
  CHECK(j["bound"] == "trudgian-relaxed");
  CHECK(j["form"] == "ratio");
  CHECK(j["x_double_star"] == 11);
  REQUIRE(j["violations"].size() == 3);
  CHECK(j["violations"][0]["relative_gap"] == "1/2");
  CHECK(j["violations"][1]["relative_gap"] == "2/3");
  CHECK(j["violations"][2]["relative_gap"] == "4/7");
  CHECK(j["max_relative_gap"]["value"] == "2/3");
  const std::string text = render_report_text(rep);
  CHECK(text.find("x_** = 11") != std::string::npos);
  CHECK(text.find("violation at p = 7") != std::string::npos);
}

TEST_CASE("theta report JSON shape") {
  const auto& ds = builtin_dataset();
  const auto& sv = shared_sieve();
  const VerificationReport rep =
      verify_theta_bound(ds.by_label("visser-half-0-third"), 2, 40, sv);
  const nlohmann::json j = report_to_json(rep);
  CHECK(j["form"] == "theta");
  CHECK(!j["theta_violations"].empty());
  CHECK(j.contains("theta_at_end"));
}

TEST_CASE("envelope points") {
  const auto& ds = builtin_dataset();
  const EnvelopePoint a = envelope_point(ds.by_label("dlvp-885"), GapBoundForm::Linear, "2");
  REQUIRE(a.ok);
  CHECK(a.value == "583.6551661");

  const EnvelopePoint b =
      envelope_point(ds.by_label("visser-half-0-third"), GapBoundForm::Ratio, "11");
  REQUIRE(b.ok);
  CHECK(b.value == "0.8506294814");

  const EnvelopePoint c =
      envelope_point(ds.by_label("dlvp-one-e1e6"), GapBoundForm::Linear, "exp(1000000)");
  REQUIRE(c.ok);
  CHECK(c.value == "2.500924441e-428");

  const EnvelopePoint d = envelope_point(ds.by_label("dlvp-885"), GapBoundForm::Linear, "1");
  CHECK_FALSE(d.ok);
  CHECK(!d.error.empty());

  const EnvelopePoint e = envelope_point(ds.by_label("dlvp-885"), GapBoundForm::Linear, "oops");
  CHECK_FALSE(e.ok);
}

TEST_CASE("derive row rendering") {
  const auto& ds = builtin_dataset();
  const ChebyshevBound& bd = ds.by_label("trudgian-relaxed");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < ds.rows.size(); ++i)
    if (ds.rows[i].label == "trudgian-relaxed") idx = i;
  const TableRow row = make_derive_row(bd, ds.raw[idx]);
  CHECK(row.x_peak == "9.487735836");
  CHECK(row.f_peak == "0.1857113287");
  CHECK(row.x_star == "43");
  CHECK(row.a == "1/4");
  CHECK(row.ratio_ok);

  // restricted row: x_star stays symbolic
  std::size_t jdx = 0;
  for (std::size_t i = 0; i < ds.rows.size(); ++i)
    if (ds.rows[i].label == "jy-e3000") jdx = i;
  const TableRow jrow = make_derive_row(ds.rows[jdx], ds.raw[jdx]);
  CHECK(jrow.x_star == "exp(3000)");
  CHECK_FALSE(jrow.ratio_ok);
}
