#pragma once

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gapbounds/bounds.hpp"

namespace gapbounds {

// Built-in bound-parameter dataset, one record per published theta-bound.
// Column order is fixed: label,a,b,c,x0,source.  Rows with an integer x0
// are the widely applicable bounds; rows with x0 = exp(k) are the
// asymptotically stringent bounds valid only on restricted regions.
inline constexpr std::string_view kBuiltinDatasetCsv =
    R"(label,a,b,c,x0,source
schoenfeld,0.2196138920,1/4,0.3219796502,101,Schoenfeld
schoenfeld-relaxed,1/4,1/4,1/4,31,relaxed form of Schoenfeld
trudgian,0.2428127763,1/4,0.3935970880,149,Trudgian
trudgian-relaxed,1/4,1/4,1/3,43,relaxed form of Trudgian
fks,9.220226,3/2,0.8476836,2,Fiori-Kadiri-Swidinsky
johnston-yang,9.40,1.515,0.8274,2,Johnston-Yang
dlvp-schoenfeld,0.3510691792,0,1/4,101,dlVP form via Schoenfeld
dlvp-trudgian-quarter,0.2748124978,0,1/4,149,dlVP form via Trudgian
dlvp-trudgian-third,0.4242102935,0,1/3,149,dlVP form via Trudgian
dlvp-885,295,0,1/2,2,dlVP form via FKS
dlvp-1155,385,0,1/2,2,dlVP form via Johnston-Yang
visser-1-0-quarter,1,0,1/4,2,dlVP form with unit amplitude
visser-1-0-third,1,0,1/3,3,dlVP form with unit amplitude
visser-half-0-quarter,1/2,0,1/4,29,dlVP form with half amplitude
visser-half-0-third,1/2,0,1/3,41,dlVP form with half amplitude
jy-e3000,8.87,1.514,0.8288,exp(3000),Johnston-Yang restricted
jy-e4000,8.16,1.512,0.8309,exp(4000),Johnston-Yang restricted
jy-e5000,7.66,1.511,0.8324,exp(5000),Johnston-Yang restricted
jy-e6000,7.23,1.510,0.8335,exp(6000),Johnston-Yang restricted
jy-e7000,7.00,1.510,0.8345,exp(7000),Johnston-Yang restricted
jy-e8000,6.79,1.509,0.8353,exp(8000),Johnston-Yang restricted
jy-e9000,6.59,1.509,0.8359,exp(9000),Johnston-Yang restricted
jy-e10000,6.73,1.509,0.8359,exp(10000),Johnston-Yang restricted
jy-e1e5,23.14,1.503,0.8659,exp(100000),Johnston-Yang restricted
jy-e1e6,38.58,1.502,1.0318,exp(1000000),Johnston-Yang restricted
jy-e1e7,42.91,1.501,1.0706,exp(10000000),Johnston-Yang restricted
jy-e1e8,44.42,1.501,1.0839,exp(100000000),Johnston-Yang restricted
jy-e1e9,44.98,1.501,1.0886,exp(1000000000),Johnston-Yang restricted
jy-e1e10,45.18,1.501,1.0903,exp(10000000000),Johnston-Yang restricted
dlvp-half-e3000,357,0,1/2,exp(3000),dlVP form restricted
dlvp-half-e4000,320,0,1/2,exp(4000),dlVP form restricted
dlvp-half-e5000,295,0,1/2,exp(5000),dlVP form restricted
dlvp-half-e6000,274,0,1/2,exp(6000),dlVP form restricted
dlvp-half-e7000,263,0,1/2,exp(7000),dlVP form restricted
dlvp-half-e8000,252,0,1/2,exp(8000),dlVP form restricted
dlvp-half-e9000,243,0,1/2,exp(9000),dlVP form restricted
dlvp-half-e10000,249,0,1/2,exp(10000),dlVP form restricted
dlvp-half-e1e5,644,0,1/2,exp(100000),dlVP form restricted
dlvp-half-e1e6,348,0,1/2,exp(1000000),dlVP form restricted
dlvp-half-e1e7,312,0,1/2,exp(10000000),dlVP form restricted
dlvp-half-e1e8,301,0,1/2,exp(100000000),dlVP form restricted
dlvp-half-e1e9,298,0,1/2,exp(1000000000),dlVP form restricted
dlvp-half-e1e10,297,0,1/2,exp(10000000000),dlVP form restricted
dlvp-one-e1e6,1642333,0,1,exp(1000000),dlVP form restricted
dlvp-one-e1e7,165152,0,1,exp(10000000),dlVP form restricted
dlvp-one-e1e8,101831,0,1,exp(100000000),dlVP form restricted
dlvp-one-e1e9,87551,0,1,exp(1000000000),dlVP form restricted
dlvp-one-e1e10,83063,0,1,exp(10000000000),dlVP form restricted
)";

inline constexpr std::string_view kDatasetHeader = "label,a,b,c,x0,source";

struct BoundDataset {
  std::vector<ChebyshevBound> rows;
  // Raw field text per row (same order), kept for byte-exact re-emission.
  std::vector<std::array<std::string, 6>> raw;

  const ChebyshevBound& by_label(std::string_view label) const {
    for (const auto& r : rows)
      if (r.label == label) return r;
    throw std::invalid_argument("unknown bound label '" + std::string(label) + "'");
  }
  bool has_label(std::string_view label) const {
    for (const auto& r : rows)
      if (r.label == label) return true;
    return false;
  }
};

inline BoundDataset parse_dataset(std::string_view text) {
  BoundDataset ds;
  std::istringstream in{std::string(text)};
  std::string line;
  bool saw_header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kDatasetHeader)
        throw std::invalid_argument("dataset: bad header line '" + line + "'");
      saw_header = true;
      continue;
    }
    std::array<std::string, 6> f;
    std::size_t pos = 0;
    for (int i = 0; i < 5; ++i) {
      const std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos)
        throw std::invalid_argument("dataset: line " + std::to_string(lineno) + " has too few fields");
      f[i] = line.substr(pos, comma - pos);
      pos = comma + 1;
    }
    f[5] = line.substr(pos);
    ds.rows.emplace_back(parse_rational(f[1]), parse_rational(f[2]), parse_rational(f[3]),
                         parse_threshold(f[4]), f[0], f[5]);
    ds.raw.push_back(std::move(f));
  }
  if (!saw_header) throw std::invalid_argument("dataset: missing header line");
  for (std::size_t i = 0; i < ds.rows.size(); ++i)
    for (std::size_t j = i + 1; j < ds.rows.size(); ++j)
      if (ds.rows[i].label == ds.rows[j].label)
        throw std::invalid_argument("dataset: duplicate label '" + ds.rows[i].label + "'");
  return ds;
}

inline BoundDataset load_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("dataset: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

inline const BoundDataset& builtin_dataset() {
  static const BoundDataset ds = parse_dataset(kBuiltinDatasetCsv);
  return ds;
}

// Widely applicable rows are those with an integer validity threshold.
inline bool is_widely_applicable(const ChebyshevBound& bd) { return !bd.x0.is_exp; }

// Membership in the two gap-bound tables: widely applicable rows split by
// whether the ratio form is admissible (f_peak <= 1) or only the linear
// form applies (f_peak > 1).
inline std::vector<const ChebyshevBound*> table_rows(const BoundDataset& ds, bool ratio_table) {
  std::vector<const ChebyshevBound*> out;
  for (const auto& r : ds.rows) {
    if (!is_widely_applicable(r)) continue;
    const Ternary t = f_peak_at_most_one(derive_thresholds(r));
    if (t == Ternary::Unknown)
      throw std::runtime_error("table_rows: f_peak not separable from 1 for '" + r.label + "'");
    if ((t == Ternary::True) == ratio_table) out.push_back(&r);
  }
  return out;
}

inline std::vector<const ChebyshevBound*> restricted_rows(const BoundDataset& ds) {
  std::vector<const ChebyshevBound*> out;
  for (const auto& r : ds.rows)
    if (r.x0.is_exp) out.push_back(&r);
  return out;
}

}  // namespace gapbounds
