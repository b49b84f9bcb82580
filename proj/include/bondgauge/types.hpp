#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bondgauge/errors.hpp"

namespace bondgauge {

inline constexpr int kNumParams = 5;

/// Physical parameter vector: (log interfacial stiffness, adhesive
/// attenuation, multiplicative phase correction, additive phase correction,
/// bondline thickness), in that fixed order.
struct ParameterVector {
  double log_k0 = 0.0;  // log of interfacial stiffness (base configurable)
  double alpha0 = 0.0;  // adhesive acoustic attenuation, Np/m
  double a = 0.0;       // phase correction slope, deg per (rad/s)
  double b = 0.0;       // phase correction offset, deg
  double l_bl = 0.0;    // bondline thickness, m

  double operator[](int i) const { return std::array{log_k0, alpha0, a, b, l_bl}[static_cast<std::size_t>(i)]; }

  std::array<double, kNumParams> to_array() const { return {log_k0, alpha0, a, b, l_bl}; }

  static ParameterVector from_array(const std::array<double, kNumParams>& v) {
    return {v[0], v[1], v[2], v[3], v[4]};
  }

  bool finite() const {
    for (double v : to_array()) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }
};

/// Hyperrectangle of admissible parameters.
struct ParameterBox {
  std::array<double, kNumParams> lower{};
  std::array<double, kNumParams> upper{};

  void validate() const {
    for (int i = 0; i < kNumParams; ++i) {
      if (!(lower[static_cast<std::size_t>(i)] <= upper[static_cast<std::size_t>(i)])) {
        throw ConfigError("parameter box: lower[" + std::to_string(i) + "] > upper[" + std::to_string(i) + "]");
      }
    }
  }

  bool contains(const ParameterVector& theta) const {
    const auto v = theta.to_array();
    for (std::size_t i = 0; i < kNumParams; ++i) {
      if (v[i] < lower[i] || v[i] > upper[i]) return false;
    }
    return true;
  }

  double width(int i) const {
    return upper[static_cast<std::size_t>(i)] - lower[static_cast<std::size_t>(i)];
  }

  ParameterVector midpoint() const {
    std::array<double, kNumParams> m{};
    for (std::size_t i = 0; i < kNumParams; ++i) m[i] = 0.5 * (lower[i] + upper[i]);
    return ParameterVector::from_array(m);
  }

  ParameterVector clip(const ParameterVector& theta) const {
    auto v = theta.to_array();
    for (std::size_t i = 0; i < kNumParams; ++i) {
      if (v[i] < lower[i]) v[i] = lower[i];
      if (v[i] > upper[i]) v[i] = upper[i];
    }
    return ParameterVector::from_array(v);
  }
};

/// Elastic constants of the adherend and adhesive layers.
struct MaterialSpec {
  // Defaults model an aluminum adherend and epoxy adhesive; they are
  // placeholders for lab values, overridable through the config file.
  double e1 = 69.0e9;       // adherend Young's modulus, Pa
  double c_l1 = 6320.0;     // adherend longitudinal wave speed, m/s
  double alpha1 = 0.0;      // adherend attenuation, Np/m
  double e_adh = 3.5e9;     // adhesive Young's modulus, Pa
  double c_l_adh = 2500.0;  // adhesive longitudinal wave speed, m/s

  void validate() const {
    if (!(e1 > 0.0 && c_l1 > 0.0 && e_adh > 0.0 && c_l_adh > 0.0) || alpha1 < 0.0) {
      throw ConfigError("material constants must be strictly positive (attenuation nonnegative)");
    }
  }
};

/// Swept-frequency grid, stored as angular frequencies in rad/s.
struct FrequencyGrid {
  std::vector<double> omegas;

  std::size_t size() const { return omegas.size(); }

  void validate() const {
    if (omegas.size() < kNumParams + 1) {
      throw ConfigError("frequency grid needs at least " + std::to_string(kNumParams + 1) + " points");
    }
    double prev = 0.0;
    for (double w : omegas) {
      if (!(w > prev)) throw ConfigError("frequency grid must be strictly increasing and positive");
      prev = w;
    }
  }

  /// n points linearly spaced between the given ordinary frequencies (Hz).
  static FrequencyGrid linear_hz(std::size_t n, double f_min_hz, double f_max_hz) {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    FrequencyGrid g;
    g.omegas.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
      g.omegas[i] = kTwoPi * (f_min_hz + (f_max_hz - f_min_hz) * t);
    }
    g.validate();
    return g;
  }
};

enum class IntervalMethod { ssb, ls, none };

inline std::string to_string(IntervalMethod m) {
  switch (m) {
    case IntervalMethod::ssb: return "ssb";
    case IntervalMethod::ls: return "ls";
    default: return "none";
  }
}

/// Two-sided confidence interval with its confidence level.
struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;  // confidence level, e.g. 0.95
  IntervalMethod method = IntervalMethod::none;
  // Set when an empty box intersection collapsed the interval to one point.
  bool degenerate = false;

  double length() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

// Table-style parameter presets used across the experiments.
inline ParameterVector typical_parameters() { return {14.85, 8.05e3, 9.62e-6, -42.19, 9.53e-5}; }

inline ParameterVector boundary_parameters() {
  ParameterVector p = typical_parameters();
  p.alpha0 = 1.0e4 - 1.0e-1;
  return p;
}

inline ParameterBox default_parameter_box() {
  ParameterBox box;
  box.lower = {10.0, 0.0, -3.0e-5, -100.0, 0.0};
  box.upper = {20.0, 1.0e4, 3.0e-5, 100.0, 1.0e-4};
  return box;
}

inline FrequencyGrid default_frequency_grid() { return FrequencyGrid::linear_hz(100, 2.0e6, 8.0e6); }

}  // namespace bondgauge
