#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "confract/trajectory.hpp"
#include "confract/types.hpp"

namespace confract {

/// Shortest-of-17-significant-digits rendering; %.17g round-trips every
/// finite double exactly through from_chars.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// CSV with header "t,x", one grid point per row, full double precision.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x\n";
  for (std::size_t i = 0; i < traj.size(); ++i)
    out << format_double(traj.grid[i]) << ',' << format_double(traj.values[i]) << '\n';
}

/// Side-by-side CSV for solver/oracle comparison.
inline void write_compare_csv(std::ostream& out, const Trajectory& solved,
                              const Trajectory& oracle) {
  if (solved.grid != oracle.grid)
    throw std::invalid_argument("write_compare_csv: trajectories must share a grid");
  out << "t,x_solver,x_oracle\n";
  for (std::size_t i = 0; i < solved.size(); ++i)
    out << format_double(solved.grid[i]) << ',' << format_double(solved.values[i]) << ','
        << format_double(oracle.values[i]) << '\n';
}

namespace detail {

inline double parse_csv_double(std::string_view field, std::size_t lineno) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw std::runtime_error("trajectory CSV: bad number '" + std::string(field) + "' on line " +
                             std::to_string(lineno));
  return out;
}

inline std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Reads back the write_trajectory_csv format. Values written by
/// format_double reload to bit-identical doubles.
inline Trajectory read_trajectory_csv(std::istream& in, FractionalOrder alpha) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || detail::strip_cr(line) != "t,x")
    throw std::runtime_error("trajectory CSV: missing 't,x' header");
  ++lineno;
  std::vector<double> grid, values;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = detail::strip_cr(line);
    if (s.empty()) continue;
    const auto comma = s.find(',');
    if (comma == std::string_view::npos)
      throw std::runtime_error("trajectory CSV: missing comma on line " + std::to_string(lineno));
    grid.push_back(detail::parse_csv_double(s.substr(0, comma), lineno));
    values.push_back(detail::parse_csv_double(s.substr(comma + 1), lineno));
  }
  return Trajectory::make(std::move(grid), std::move(values), alpha);
}

/// Flat key-value report writer: one "key = value" line per entry, doubles
/// in full precision. The csv flavor emits "key,value" rows with a header
/// so reports can be loaded by the same tooling as trajectories.
class KvWriter {
 public:
  KvWriter(std::ostream& out, bool csv) : out_(out), csv_(csv) {
    if (csv_) out_ << "key,value\n";
  }

  void put(std::string_view key, std::string_view value) {
    if (csv_) out_ << key << ',' << value << '\n';
    else out_ << key << " = " << value << '\n';
  }
  void put(std::string_view key, const char* value) { put(key, std::string_view(value)); }
  void put(std::string_view key, double value) { put(key, std::string_view(format_double(value))); }
  void put(std::string_view key, bool value) { put(key, std::string_view(value ? "true" : "false")); }
  void put(std::string_view key, std::size_t value) {
    put(key, std::string_view(std::to_string(value)));
  }

 private:
  std::ostream& out_;
  bool csv_;
};

}  // namespace confract
