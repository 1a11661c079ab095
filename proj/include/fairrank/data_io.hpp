#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fairrank/fairness.hpp"

namespace fairrank::io {

// Raised on malformed or out-of-contract input files; the message always
// names the offending location.
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense users-by-items score matrix; every entry validated against the scale.
struct RelevanceMatrix {
  std::vector<std::vector<double>> rows;
  RatingScale scale;

  std::size_t users() const { return rows.size(); }
  std::size_t items() const { return rows.empty() ? 0 : rows.front().size(); }
};

namespace detail {

inline bool parse_double(std::string_view text, double& out) {
  // Trim ASCII whitespace; from_chars itself accepts no leading spaces.
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t' ||
                           text.front() == '\r'))
    text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\r'))
    text.remove_suffix(1);
  if (text.empty()) return false;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace detail

// Loads a rectangular numeric CSV (optional single header row) of relevance
// scores. Out-of-scale values are rejected, never clipped.
inline RelevanceMatrix load_relevance_csv(const std::string& path,
                                          const RatingScale& scale) {
  validate(scale);
  std::ifstream in(path);
  if (!in)
    throw IngestError("cannot open relevance file: " + path);

  RelevanceMatrix matrix;
  matrix.scale = scale;
  std::string line;
  std::size_t line_no = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = detail::split_csv_line(line);

    if (first_data_line) {
      // A header is any first row with a non-numeric cell.
      bool numeric = true;
      double ignored;
      for (const auto& c : cells)
        if (!detail::parse_double(c, ignored)) {
          numeric = false;
          break;
        }
      first_data_line = false;
      if (!numeric) continue;
    }

    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t col = 0; col < cells.size(); ++col) {
      double value;
      if (!detail::parse_double(cells[col], value))
        throw IngestError(path + ": non-numeric cell at row " +
                          std::to_string(line_no) + ", column " +
                          std::to_string(col + 1));
      if (!(value >= scale.min && value <= scale.max))
        throw IngestError(path + ": score " + std::to_string(value) +
                          " outside rating scale at row " +
                          std::to_string(line_no) + ", column " +
                          std::to_string(col + 1));
      row.push_back(value);
    }
    if (!matrix.rows.empty() && row.size() != matrix.rows.front().size())
      throw IngestError(path + ": ragged row " + std::to_string(line_no) +
                        " (expected " +
                        std::to_string(matrix.rows.front().size()) +
                        " columns, got " + std::to_string(row.size()) + ")");
    matrix.rows.push_back(std::move(row));
  }
  if (matrix.rows.empty())
    throw IngestError(path + ": no data rows");
  return matrix;
}

enum class SynthDistribution { uniform, skewed };

// Deterministic synthetic score matrix. `skewed` cubes the uniform draw, so
// most scores sit near the bottom of the scale with a thin high-relevance
// tail.
inline RelevanceMatrix synth_relevance(std::size_t users, std::size_t items,
                                       std::uint64_t seed,
                                       const RatingScale& scale,
                                       SynthDistribution dist) {
  validate(scale);
  if (users == 0 || items == 0)
    throw std::invalid_argument("synth_relevance: users and items must be >= 1");
  std::mt19937_64 rng(seed);
  RelevanceMatrix matrix;
  matrix.scale = scale;
  matrix.rows.assign(users, std::vector<double>(items));
  for (auto& row : matrix.rows)
    for (auto& value : row) {
      // Top 53 bits -> [0, 1); bit-exact on every platform.
      double u = double(rng() >> 11) * 0x1.0p-53;
      if (dist == SynthDistribution::skewed) u = u * u * u;
      value = scale.min + u * (scale.max - scale.min);
    }
  return matrix;
}

// One experiment cell: a privacy budget and a seed, with the unfairness of
// the three pipelines and the private pipeline's ranking quality.
struct ReportRow {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  double unfairness_none = 0.0;
  double unfairness_central_fair = 0.0;
  double unfairness_private = 0.0;
  double mean_ndcg = 0.0;
  double min_ndcg = 0.0;
  std::size_t aborts = 0;
  double runtime_ms = 0.0;
};

inline void write_report_csv(const std::vector<ReportRow>& rows,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw IngestError("cannot open report file for writing: " + path);
  out << "epsilon,seed,unfairness_none,unfairness_central_fair,"
         "unfairness_private,mean_ndcg,min_ndcg,aborts,runtime_ms\n";
  out.precision(17);
  for (const auto& r : rows) {
    out << r.epsilon << ',' << r.seed << ',' << r.unfairness_none << ','
        << r.unfairness_central_fair << ',' << r.unfairness_private << ','
        << r.mean_ndcg << ',' << r.min_ndcg << ',' << r.aborts << ','
        << r.runtime_ms << '\n';
  }
  if (!out)
    throw IngestError("write failed: " + path);
}

inline std::vector<ReportRow> read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw IngestError("cannot open report file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw IngestError(path + ": missing header");
  std::vector<ReportRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != 9)
      throw IngestError(path + ": expected 9 columns at row " +
                        std::to_string(line_no));
    double vals[9];
    for (std::size_t i = 0; i < 9; ++i)
      if (!detail::parse_double(cells[i], vals[i]))
        throw IngestError(path + ": non-numeric cell at row " +
                          std::to_string(line_no) + ", column " +
                          std::to_string(i + 1));
    ReportRow r;
    r.epsilon = vals[0];
    r.seed = std::uint64_t(vals[1]);
    r.unfairness_none = vals[2];
    r.unfairness_central_fair = vals[3];
    r.unfairness_private = vals[4];
    r.mean_ndcg = vals[5];
    r.min_ndcg = vals[6];
    r.aborts = std::size_t(vals[7]);
    r.runtime_ms = vals[8];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace fairrank::io
