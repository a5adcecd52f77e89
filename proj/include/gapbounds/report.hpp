#pragma once

#include <array>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapbounds/bounds.hpp"
#include "gapbounds/dataset.hpp"
#include "gapbounds/sieve.hpp"
#include "gapbounds/verify.hpp"

namespace gapbounds {

// All printed reals use 10 significant digits, the most any reference
// value carries.
inline std::string format_sig10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Scientific-notation rendering of 10^L for magnitudes outside double
// range (display only).
inline std::string format_pow10(double L) {
  double e = std::floor(L);
  double mant = std::pow(10.0, L - e);
  if (mant >= 9.9999999995) {  // rounding bumped the mantissa to 10
    mant /= 10.0;
    e += 1.0;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9fe%+.0f", mant, e);
  return buf;
}

inline std::string ratio_string(const PrimeGapRecord& rec) {
  return std::to_string(rec.gap()) + "/" + std::to_string(rec.p);
}

enum class OutputFormat { Markdown, Csv, Json };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "markdown") return OutputFormat::Markdown;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Derived-threshold rows and the two gap-bound tables.

struct TableRow {
  std::string label, a, b, c, x0;  // display text, verbatim from the dataset
  std::string x_peak, f_peak, x_star, x_double_star;
  bool ratio_ok = false;
};

inline TableRow make_derive_row(const ChebyshevBound& bd, const std::array<std::string, 6>& raw) {
  const DerivedThresholds d = derive_thresholds(bd);
  TableRow row;
  row.label = bd.label;
  row.a = raw[1];
  row.b = raw[2];
  row.c = raw[3];
  row.x0 = raw[4];
  row.x_peak = format_sig10(d.x_peak.mid());
  row.f_peak = format_sig10(d.f_peak.mid());
  row.x_star = d.x_star.str();
  row.ratio_ok = f_peak_at_most_one(d) == Ternary::True;
  row.x_double_star = "-";
  return row;
}

// Rows of the widely applicable (ratio-form) or intermediate-strength
// (linear-form) gap-bound table, with x_** computed live.
inline std::vector<TableRow> build_gap_table(const BoundDataset& ds, bool ratio_table,
                                             const SegmentedSieve& sv,
                                             const VerifyOptions& opts = {}) {
  std::vector<TableRow> rows;
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    const ChebyshevBound& bd = ds.rows[i];
    if (!is_widely_applicable(bd)) continue;
    const Ternary t = f_peak_at_most_one(derive_thresholds(bd));
    if (t == Ternary::Unknown)
      throw std::runtime_error("table: f_peak not separable from 1 for '" + bd.label + "'");
    if ((t == Ternary::True) != ratio_table) continue;
    TableRow row = make_derive_row(bd, ds.raw[i]);
    const GapBoundForm form = ratio_table ? GapBoundForm::Ratio : GapBoundForm::Linear;
    const XDoubleStarResult x = find_x_double_star(bd, form, sv, opts);
    if (x.infeasible)
      row.x_double_star = "INFEASIBLE";
    else
      row.x_double_star = std::to_string(x.value) + (x.caveat ? "?" : "");
    rows.push_back(std::move(row));
  }
  return rows;
}

struct TableSnapshotRow {
  const char* label;
  const char* x_peak;
  const char* f_peak;
  const char* x_star;
  const char* x_double_star;
};

// Regression snapshots: 10-significant-digit renderings of the derived
// quantities for every widely applicable row, frozen from a 50-digit
// evaluation of the dataset parameters.
inline constexpr TableSnapshotRow kRatioTableExpected[] = {
    {"schoenfeld", "11.15042039", "0.1659905476", "101", "11"},
    {"schoenfeld-relaxed", "54.59815003", "0.2144409712", "55", "11"},
    {"trudgian", "5.021606991", "0.1659905476", "149", "11"},
    {"trudgian-relaxed", "9.487735836", "0.1857113287", "43", "11"},
    {"dlvp-schoenfeld", "1", "0.3510691792", "101", "2"},
    {"dlvp-trudgian-quarter", "1", "0.2748124978", "149", "11"},
    {"dlvp-trudgian-third", "1", "0.4242102935", "149", "2"},
    {"visser-1-0-quarter", "1", "1", "2", "2"},
    {"visser-1-0-third", "1", "1", "3", "2"},
    {"visser-half-0-quarter", "1", "0.5", "29", "2"},
    {"visser-half-0-third", "1", "0.5", "41", "2"},
};

inline constexpr TableSnapshotRow kLinearTableExpected[] = {
    {"fks", "275108.1632", "20.34794437", "275109", "2"},
    {"johnston-yang", "667160.3743", "23.19042579", "667161", "2"},
    {"dlvp-885", "1", "295", "2", "2"},
    {"dlvp-1155", "1", "385", "2", "2"},
};

// Returns human-readable descriptions of every cell differing from the
// snapshot; empty means the table regressed nothing.
inline std::vector<std::string> diff_against_snapshot(const std::vector<TableRow>& rows,
                                                      bool ratio_table) {
  const TableSnapshotRow* exp = ratio_table ? kRatioTableExpected : kLinearTableExpected;
  const std::size_t n = ratio_table ? std::size(kRatioTableExpected) : std::size(kLinearTableExpected);
  std::vector<std::string> diffs;
  if (rows.size() != n) {
    diffs.push_back("row count " + std::to_string(rows.size()) + " != " + std::to_string(n));
    return diffs;
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto cell = [&](const char* name, const std::string& got, const char* want) {
      if (got != want)
        diffs.push_back(std::string(exp[i].label) + "." + name + ": got " + got + ", want " + want);
    };
    if (rows[i].label != exp[i].label) {
      diffs.push_back("row " + std::to_string(i) + ": label " + rows[i].label + " != " + exp[i].label);
      continue;
    }
    cell("x_peak", rows[i].x_peak, exp[i].x_peak);
    cell("f_peak", rows[i].f_peak, exp[i].f_peak);
    cell("x_star", rows[i].x_star, exp[i].x_star);
    cell("x_double_star", rows[i].x_double_star, exp[i].x_double_star);
  }
  return diffs;
}

inline constexpr const char* kTableColumns[] = {"label", "a",      "b",      "c",     "x0",
                                                "x_peak", "f_peak", "x_star", "x_**"};

inline std::array<std::string, 9> row_cells(const TableRow& r) {
  return {r.label, r.a, r.b, r.c, r.x0, r.x_peak, r.f_peak, r.x_star, r.x_double_star};
}

inline std::string render_table_markdown(const std::vector<TableRow>& rows) {
  std::array<std::size_t, 9> w{};
  for (std::size_t i = 0; i < 9; ++i) w[i] = std::string(kTableColumns[i]).size();
  for (const auto& r : rows) {
    const auto cells = row_cells(r);
    for (std::size_t i = 0; i < 9; ++i) w[i] = std::max(w[i], cells[i].size());
  }
  std::string out;
  auto emit = [&](const std::array<std::string, 9>& cells) {
    out += "|";
    for (std::size_t i = 0; i < 9; ++i) {
      out += " " + cells[i] + std::string(w[i] - cells[i].size(), ' ') + " |";
    }
    out += "\n";
  };
  std::array<std::string, 9> hdr;
  for (std::size_t i = 0; i < 9; ++i) hdr[i] = kTableColumns[i];
  emit(hdr);
  out += "|";
  for (std::size_t i = 0; i < 9; ++i) out += std::string(w[i] + 2, '-') + "|";
  out += "\n";
  for (const auto& r : rows) emit(row_cells(r));
  return out;
}

inline std::string render_table_csv(const std::vector<TableRow>& rows) {
  std::string out;
  for (std::size_t i = 0; i < 9; ++i) out += std::string(kTableColumns[i]) + (i + 1 < 9 ? "," : "\n");
  for (const auto& r : rows) {
    const auto cells = row_cells(r);
    for (std::size_t i = 0; i < 9; ++i) out += cells[i] + (i + 1 < 9 ? "," : "\n");
  }
  return out;
}

inline nlohmann::json table_to_json(const std::vector<TableRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    const auto cells = row_cells(r);
    for (std::size_t i = 0; i < 9; ++i) j[i == 8 ? "x_double_star" : kTableColumns[i]] = cells[i];
    j["ratio_form_ok"] = r.ratio_ok;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline std::string render_table(const std::vector<TableRow>& rows, OutputFormat fmt) {
  switch (fmt) {
    case OutputFormat::Markdown: return render_table_markdown(rows);
    case OutputFormat::Csv: return render_table_csv(rows);
    case OutputFormat::Json: return table_to_json(rows).dump(2) + "\n";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Verification reports.

inline nlohmann::json report_to_json(const VerificationReport& rep) {
  nlohmann::json j;
  j["bound"] = rep.label;
  j["form"] = rep.form;
  j["range"] = {rep.lo, rep.hi};
  if (rep.x_double_star)
    j["x_double_star"] = *rep.x_double_star;
  else
    j["x_double_star"] = nullptr;
  j["x_double_star_caveat"] = rep.x_double_star_caveat;
  j["records_checked"] = rep.records_checked;
  j["seconds"] = rep.seconds;
  if (rep.resumed_from != 0) j["resumed_from"] = rep.resumed_from;
  nlohmann::json viols = nlohmann::json::array();
  for (const auto& v : rep.violations) {
    viols.push_back({{"p", v.rec.p},
                     {"p_next", v.rec.next},
                     {"gap", v.rec.gap()},
                     {"relative_gap", ratio_string(v.rec)},
                     {"bound_lo", format_full(v.bound_value.lo)},
                     {"bound_hi", format_full(v.bound_value.hi)}});
  }
  j["violations"] = std::move(viols);
  nlohmann::json inc = nlohmann::json::array();
  for (const auto& r : rep.inconclusive)
    inc.push_back({{"p", r.p}, {"p_next", r.next}, {"relative_gap", ratio_string(r)}});
  j["inconclusive"] = std::move(inc);
  if (rep.form == "theta") {
    nlohmann::json tv = nlohmann::json::array();
    for (const auto& v : rep.theta_violations)
      tv.push_back({{"p", v.p},
                    {"right_end", v.right_end},
                    {"witness_x", v.witness_x},
                    {"deviation_lo", format_full(v.deviation.lo)},
                    {"allowance_hi", format_full(v.allowance.hi)}});
    j["theta_violations"] = std::move(tv);
    nlohmann::json ti = nlohmann::json::array();
    for (const auto& v : rep.theta_inconclusive)
      ti.push_back({{"p", v.p}, {"right_end", v.right_end}, {"witness_x", v.witness_x}});
    j["theta_inconclusive"] = std::move(ti);
    j["theta_at_end"] = {{"lo", format_full(rep.theta_at_end.lo)},
                         {"hi", format_full(rep.theta_at_end.hi)}};
  }
  if (rep.max_rel_gap.p != 0)
    j["max_relative_gap"] = {{"p", rep.max_rel_gap.p},
                             {"gap", rep.max_rel_gap.gap()},
                             {"value", ratio_string(rep.max_rel_gap)}};
  return j;
}

inline std::string render_report_text(const VerificationReport& rep) {
  std::string out;
  out += rep.form + " scan of '" + rep.label + "' over [" + std::to_string(rep.lo) + ", " +
         std::to_string(rep.hi) + "]\n";
  if (rep.resumed_from != 0)
    out += "  resumed from checkpoint at " + std::to_string(rep.resumed_from) + "\n";
  out += "  records checked: " + std::to_string(rep.records_checked) + "\n";
  const std::size_t nv = rep.violations.size() + rep.theta_violations.size();
  const std::size_t ni = rep.inconclusive.size() + rep.theta_inconclusive.size();
  out += "  violations: " + std::to_string(nv) + ", inconclusive: " + std::to_string(ni) + "\n";
  for (const auto& v : rep.violations)
    out += "    violation at p = " + std::to_string(v.rec.p) + ": g/p = " + ratio_string(v.rec) +
           " >= bound <= " + format_sig10(v.bound_value.hi) + "\n";
  for (const auto& v : rep.theta_violations) {
    const bool integral = v.witness_x == std::floor(v.witness_x);
    out += "    violation on [" + std::to_string(v.p) + ", " + std::to_string(v.right_end) +
           ") witnessed at x = " +
           (integral ? format_sig10(v.witness_x) : format_full(v.witness_x)) + "\n";
  }
  for (const auto& r : rep.inconclusive)
    out += "    inconclusive at p = " + std::to_string(r.p) + "\n";
  for (const auto& v : rep.theta_inconclusive)
    out += "    inconclusive on [" + std::to_string(v.p) + ", " + std::to_string(v.right_end) + ")\n";
  if (rep.x_double_star) {
    out += "  x_** = " + std::to_string(*rep.x_double_star) +
           (rep.x_double_star_caveat ? " (caveat: inconclusive records present)" : "") + "\n";
    if (nv > 0)
      out += "  note: bound fails at the primes listed above; the threshold above which it is "
             "verified is x_** = " + std::to_string(*rep.x_double_star) + "\n";
  }
  if (rep.form == "theta")
    out += "  theta(hi) in [" + format_full(rep.theta_at_end.lo) + ", " +
           format_full(rep.theta_at_end.hi) + "]\n";
  if (rep.max_rel_gap.p != 0)
    out += "  max relative gap: " + ratio_string(rep.max_rel_gap) + " at p = " +
           std::to_string(rep.max_rel_gap.p) + "\n";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", rep.seconds);
  out += "  elapsed: " + std::string(buf) + " s\n";
  return out;
}

// ---------------------------------------------------------------------------
// Bound envelopes.

struct EnvelopePoint {
  std::string x_text;
  bool ok = false;
  std::string value;
  std::string error;
};

// Evaluates the chosen form at one point given as either a plain real or
// "exp(k)"; the latter goes through the log-space display path since the
// value may be far outside double range.
inline EnvelopePoint envelope_point(const ChebyshevBound& bd, GapBoundForm form,
                                    const std::string& x_text) {
  EnvelopePoint pt;
  pt.x_text = x_text;
  try {
    if (x_text.rfind("exp(", 0) == 0) {
      const Threshold t = parse_threshold(x_text);
      pt.value = format_pow10(log10_gap_bound(bd, form, t.exp_k));
    } else {
      std::size_t pos = 0;
      const double x = std::stod(x_text, &pos);
      if (pos != x_text.size())
        throw std::invalid_argument("bad envelope point '" + x_text + "'");
      if (!(x >= 2.0)) throw std::domain_error("envelope requires x >= 2");
      pt.value = format_sig10(gap_bound_value(bd, form, x).mid());
    }
    pt.ok = true;
  } catch (const std::exception& e) {
    pt.error = e.what();
  }
  return pt;
}

}  // namespace gapbounds
