// Command-line front end: reproduces the gap-bound tables, derives peak
// thresholds, verifies gap and theta bounds against actual primes, and
// prints bound envelopes for external plotting.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gapbounds/bounds.hpp"
#include "gapbounds/dataset.hpp"
#include "gapbounds/report.hpp"
#include "gapbounds/sieve.hpp"
#include "gapbounds/verify.hpp"

namespace {

using namespace gapbounds;

struct GlobalConfig {
  std::uint64_t n_max = SegmentedSieve::kDefaultNMax;
  std::string dataset_path;
  std::string format = "markdown";
  std::string output;
  std::uint64_t segment_size = SegmentedSieve::kDefaultSegmentSize;
  bool no_escalation = false;
  std::string checkpoint_dir;

  VerifyOptions verify_options() const {
    VerifyOptions o;
    o.precision_escalation = !no_escalation;
    return o;
  }
};

struct BoundSelector {
  std::string label, a, b, c, x0;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--label", label, "bound label from the dataset");
    cmd->add_option("--a", a, "amplitude a (integer, fraction or decimal)");
    cmd->add_option("--b", b, "log-power exponent b");
    cmd->add_option("--c", c, "exponential rate c");
    cmd->add_option("--x0", x0, "validity threshold: integer or exp(k)");
  }
};

struct ResolvedBound {
  ChebyshevBound bound;
  std::array<std::string, 6> text;
};

ResolvedBound resolve_bound(const BoundDataset& ds, const BoundSelector& sel) {
  if (!sel.a.empty() || !sel.b.empty() || !sel.c.empty() || !sel.x0.empty()) {
    if (sel.a.empty() || sel.b.empty() || sel.c.empty() || sel.x0.empty())
      throw std::invalid_argument("explicit bounds need all of --a --b --c --x0");
    const std::string label = sel.label.empty() ? "custom" : sel.label;
    ChebyshevBound bd(parse_rational(sel.a), parse_rational(sel.b), parse_rational(sel.c),
                      parse_threshold(sel.x0), label, "command line");
    return {bd, {label, sel.a, sel.b, sel.c, sel.x0, "command line"}};
  }
  if (sel.label.empty())
    throw std::invalid_argument("select a bound with --label or with --a --b --c --x0");
  for (std::size_t i = 0; i < ds.rows.size(); ++i)
    if (ds.rows[i].label == sel.label) return {ds.rows[i], ds.raw[i]};
  throw std::invalid_argument("unknown bound label '" + sel.label + "'");
}

const BoundDataset& load_dataset(const GlobalConfig& cfg) {
  static BoundDataset from_file;
  if (cfg.dataset_path.empty()) return builtin_dataset();
  from_file = load_dataset_file(cfg.dataset_path);
  return from_file;
}

void write_output_json(const GlobalConfig& cfg, const nlohmann::json& j) {
  if (cfg.output.empty()) return;
  std::ofstream f(cfg.output);
  if (!f) throw std::runtime_error("cannot open output file '" + cfg.output + "'");
  f << j.dump(2) << "\n";
}

void print_report(const GlobalConfig& cfg, const VerificationReport& rep) {
  const OutputFormat fmt = parse_format(cfg.format);
  if (fmt == OutputFormat::Json)
    std::cout << report_to_json(rep).dump(2) << "\n";
  else
    std::cout << render_report_text(rep);
  write_output_json(cfg, report_to_json(rep));
}

int report_exit_code(const VerificationReport& rep) {
  if (!rep.violations.empty() || !rep.theta_violations.empty()) return 1;
  if (!rep.inconclusive.empty() || !rep.theta_inconclusive.empty()) return 2;
  return 0;
}

int run_derive(const GlobalConfig& cfg, const BoundSelector& sel) {
  const ResolvedBound rb = resolve_bound(load_dataset(cfg), sel);
  TableRow row = make_derive_row(rb.bound, rb.text);
  const OutputFormat fmt = parse_format(cfg.format);
  std::vector<TableRow> rows{row};
  switch (fmt) {
    case OutputFormat::Json:
      std::cout << table_to_json(rows).dump(2) << "\n";
      break;
    case OutputFormat::Csv:
      std::cout << "label,a,b,c,x0,x_peak,f_peak,x_star,ratio_form_ok\n"
                << row.label << ',' << row.a << ',' << row.b << ',' << row.c << ',' << row.x0
                << ',' << row.x_peak << ',' << row.f_peak << ',' << row.x_star << ','
                << (row.ratio_ok ? "yes" : "no") << "\n";
      break;
    case OutputFormat::Markdown:
      std::cout << render_table(rows, fmt);
      std::cout << (row.ratio_ok ? "f_peak <= 1: ratio form admissible\n"
                                 : "f_peak > 1: linear form only\n");
      break;
  }
  write_output_json(cfg, table_to_json(rows));
  return 0;
}

int run_table(const GlobalConfig& cfg, const std::string& which) {
  bool ratio_table = false;
  if (which == "IV") {
    ratio_table = true;
  } else if (which == "V") {
    ratio_table = false;
  } else {
    throw std::invalid_argument("table selector must be IV or V");
  }
  const BoundDataset& ds = load_dataset(cfg);
  const SegmentedSieve sv(cfg.n_max, cfg.segment_size);
  const std::vector<TableRow> rows = build_gap_table(ds, ratio_table, sv, cfg.verify_options());
  std::cout << render_table(rows, parse_format(cfg.format));
  write_output_json(cfg, table_to_json(rows));
  const std::vector<std::string> diffs = diff_against_snapshot(rows, ratio_table);
  for (const auto& d : diffs) std::cerr << "regression mismatch: " << d << "\n";
  return diffs.empty() ? 0 : 1;
}

int run_verify_gaps(const GlobalConfig& cfg, const BoundSelector& sel, const std::string& form,
                    std::uint64_t lo, std::uint64_t hi) {
  const ResolvedBound rb = resolve_bound(load_dataset(cfg), sel);
  const SegmentedSieve sv(cfg.n_max, cfg.segment_size);
  VerificationReport rep = scan_gap_bounds(rb.bound, parse_form(form), lo, hi, sv,
                                           cfg.verify_options());
  attach_x_double_star(rep, rb.bound);
  print_report(cfg, rep);
  return report_exit_code(rep);
}

int run_verify_theta(const GlobalConfig& cfg, const BoundSelector& sel, std::uint64_t lo,
                     std::uint64_t hi) {
  const ResolvedBound rb = resolve_bound(load_dataset(cfg), sel);
  const SegmentedSieve sv(cfg.n_max, cfg.segment_size);
  VerifyOptions opts = cfg.verify_options();
  if (!cfg.checkpoint_dir.empty())
    opts.checkpoint_path = cfg.checkpoint_dir + "/" + rb.bound.label + "-theta-" +
                           std::to_string(lo) + "-" + std::to_string(hi) + ".ckpt";
  const VerificationReport rep = verify_theta_bound(rb.bound, lo, hi, sv, opts);
  print_report(cfg, rep);
  return report_exit_code(rep);
}

int run_envelope(const GlobalConfig& cfg, const BoundSelector& sel, const std::string& form,
                 const std::vector<std::string>& points) {
  const ResolvedBound rb = resolve_bound(load_dataset(cfg), sel);
  const GapBoundForm f = parse_form(form);
  const OutputFormat fmt = parse_format(cfg.format);
  nlohmann::json arr = nlohmann::json::array();
  std::string text;
  if (fmt == OutputFormat::Csv) text += "x,bound\n";
  for (const auto& p : points) {
    const EnvelopePoint pt = envelope_point(rb.bound, f, p);
    nlohmann::json rec;
    rec["x"] = pt.x_text;
    if (pt.ok)
      rec["value"] = pt.value;
    else
      rec["error"] = pt.error;
    arr.push_back(std::move(rec));
    if (fmt == OutputFormat::Csv)
      text += pt.x_text + "," + (pt.ok ? pt.value : "error: " + pt.error) + "\n";
    else
      text += pt.x_text + " -> " + (pt.ok ? pt.value : "error: " + pt.error) + "\n";
  }
  if (fmt == OutputFormat::Json)
    std::cout << arr.dump(2) << "\n";
  else
    std::cout << text;
  write_output_json(cfg, arr);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalConfig cfg;
  CLI::App app{"rigorous effective bounds on the Chebyshev theta function and prime gaps"};
  app.require_subcommand(1);
  app.add_option("--n-max", cfg.n_max, "sieve ceiling")->capture_default_str();
  app.add_option("--dataset", cfg.dataset_path, "bound-parameter CSV (default: built-in)");
  app.add_option("--format", cfg.format, "output format: markdown, csv or json")
      ->capture_default_str();
  app.add_option("--output", cfg.output, "also write a JSON report to this file");
  app.add_option("--segment-size", cfg.segment_size, "sieve segment length")
      ->capture_default_str();
  app.add_flag("--no-escalation", cfg.no_escalation, "disable precision escalation");
  app.add_option("--checkpoint", cfg.checkpoint_dir, "checkpoint directory for theta scans");

  BoundSelector derive_sel;
  CLI::App* derive = app.add_subcommand("derive", "derive x_peak, f_peak and x_star for a bound");
  derive_sel.add_options(derive);

  std::string table_which;
  CLI::App* table = app.add_subcommand(
      "table", "reproduce a gap-bound table (IV: ratio form, V: linear form) and regress it");
  table->add_option("which", table_which, "IV or V")->required();

  BoundSelector vg_sel;
  std::string vg_form;
  std::uint64_t vg_lo = 2, vg_hi = 0;
  CLI::App* vgaps = app.add_subcommand("verify-gaps", "check a gap bound against actual prime gaps");
  vg_sel.add_options(vgaps);
  vgaps->add_option("--form", vg_form, "ratio or linear")->required();
  vgaps->add_option("--lo", vg_lo, "first p to check")->capture_default_str();
  vgaps->add_option("--hi", vg_hi, "last p to check")->required();

  BoundSelector vt_sel;
  std::uint64_t vt_lo = 2, vt_hi = 0;
  CLI::App* vtheta = app.add_subcommand("verify-theta", "verify |theta(x)-x| < x f(x) on a range");
  vt_sel.add_options(vtheta);
  vtheta->add_option("--lo", vt_lo, "range start")->capture_default_str();
  vtheta->add_option("--hi", vt_hi, "range end")->required();

  BoundSelector env_sel;
  std::string env_form;
  std::vector<std::string> env_points;
  CLI::App* env = app.add_subcommand("envelope", "tabulate bound values at given points");
  env_sel.add_options(env);
  env->add_option("--form", env_form, "ratio or linear")->required();
  env->add_option("--x", env_points, "evaluation point: a real or exp(k); repeatable")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (derive->parsed()) return run_derive(cfg, derive_sel);
    if (table->parsed()) return run_table(cfg, table_which);
    if (vgaps->parsed()) return run_verify_gaps(cfg, vg_sel, vg_form, vg_lo, vg_hi);
    if (vtheta->parsed()) return run_verify_theta(cfg, vt_sel, vt_lo, vt_hi);
    if (env->parsed()) return run_envelope(cfg, env_sel, env_form, env_points);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
