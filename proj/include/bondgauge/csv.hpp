#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bondgauge/bond.hpp"
#include "bondgauge/errors.hpp"
#include "bondgauge/simulate.hpp"
#include "bondgauge/types.hpp"

namespace bondgauge {

/// Shortest round-trippable decimal rendering, stable across runs.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << content;
  if (!out) throw ConfigError("write failed: " + path);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                         const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open data file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty data file: " + path);
  {
    std::string header = line;
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != expected_header) {
      throw ConfigError("unexpected header in " + path + " (want '" + expected_header + "')");
    }
  }
  std::vector<std::vector<double>> rows;
  const std::size_t ncols = split_csv_line(expected_header).size();
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != ncols) throw ConfigError("bad column count in " + path);
    std::vector<double> row;
    row.reserve(ncols);
    for (const auto& f : fields) {
      try {
        row.push_back(std::stod(f));
      } catch (const std::exception&) {
        throw ConfigError("non-numeric field '" + f + "' in " + path);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Phase data file: one row per grid point, `omega_hz,phase_deg`, where
/// omega_hz is the ordinary frequency omega / 2 pi.
inline std::string render_phase_csv(const FrequencyGrid& grid, const Eigen::VectorXd& y) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::ostringstream out;
  out << "omega_hz,phase_deg\n";
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    out << fmt_double(grid.omegas[static_cast<std::size_t>(i)] / kTwoPi) << ',' << fmt_double(y(i)) << '\n';
  }
  return out.str();
}

struct PhaseData {
  std::vector<double> omega_hz;
  Eigen::VectorXd phases;
};

inline PhaseData read_phase_csv(const std::string& path) {
  const auto rows = detail::read_numeric_csv(path, "omega_hz,phase_deg");
  PhaseData data;
  data.omega_hz.reserve(rows.size());
  data.phases.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    data.omega_hz.push_back(rows[i][0]);
    data.phases(static_cast<Eigen::Index>(i)) = rows[i][1];
  }
  return data;
}

inline BondPairs read_pairs_csv(const std::string& path) {
  const auto rows = detail::read_numeric_csv(path, "x,z");
  BondPairs pairs;
  for (const auto& row : rows) {
    pairs.x.push_back(row[0]);
    pairs.z.push_back(row[1]);
  }
  pairs.validate();
  return pairs;
}

inline std::string render_report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "method," << report.key_name
      << ",coverage_stiffness,cp_lo,cp_hi,coverage_bond,cp_lo_bond,cp_hi_bond,"
         "mean_len_stiffness,mean_len_bond,failures\n";
  for (const auto& row : report.rows) {
    out << to_string(row.method) << ',' << fmt_double(row.key) << ',' << fmt_double(row.coverage_stiff())
        << ',' << fmt_double(row.cp_stiff.lower) << ',' << fmt_double(row.cp_stiff.upper) << ','
        << fmt_double(row.coverage_bond()) << ',' << fmt_double(row.cp_bond.lower) << ','
        << fmt_double(row.cp_bond.upper) << ',' << fmt_double(row.mean_len_stiff) << ','
        << fmt_double(row.mean_len_bond) << ',' << row.failures << '\n';
  }
  return out.str();
}

inline std::string render_bond_sweep_csv(const BondSweepReport& report) {
  std::ostringstream out;
  out << "beta1,sigma_b,n_pairs,mean_len_bond,replications,failures\n";
  for (const auto& row : report.rows) {
    out << fmt_double(row.beta1) << ',' << fmt_double(row.sigma_b) << ',' << row.n_pairs << ','
        << fmt_double(row.mean_len_bond) << ',' << row.replications << ',' << row.failures << '\n';
  }
  return out.str();
}

/// Plot-ready series: one x column and one y column per method/metric.
inline std::string render_plot_series_csv(const ExperimentReport& report, bool stiffness_metrics,
                                          bool coverage) {
  std::ostringstream out;
  out << report.key_name;
  std::vector<IntervalMethod> methods;
  for (const auto& row : report.rows) {
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end()) {
      methods.push_back(row.method);
    }
  }
  for (IntervalMethod m : methods) {
    const std::string name = to_string(m);
    if (coverage) {
      out << ',' << name << "," << name << "_cp_lo," << name << "_cp_hi";
    } else {
      out << ',' << name;
    }
  }
  out << '\n';
  std::vector<double> keys;
  for (const auto& row : report.rows) {
    if (std::find(keys.begin(), keys.end(), row.key) == keys.end()) keys.push_back(row.key);
  }
  for (double key : keys) {
    out << fmt_double(key);
    for (IntervalMethod m : methods) {
      const CellRow* row = report.find(m, key);
      if (!row) {
        out << (coverage ? ",,," : ",");
        continue;
      }
      if (coverage) {
        const double frac = stiffness_metrics ? row->coverage_stiff() : row->coverage_bond();
        const ConfidenceInterval& cp = stiffness_metrics ? row->cp_stiff : row->cp_bond;
        out << ',' << fmt_double(frac) << ',' << fmt_double(cp.lower) << ',' << fmt_double(cp.upper);
      } else {
        out << ',' << fmt_double(stiffness_metrics ? row->mean_len_stiff : row->mean_len_bond);
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace bondgauge
