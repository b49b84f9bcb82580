#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "bondgauge/errors.hpp"
#include "bondgauge/types.hpp"

namespace bondgauge {

using Matrix5d = Eigen::Matrix<double, Eigen::Dynamic, kNumParams>;

/// Per-parameter absolute scales used to size finite-difference steps.
using JacobianScales = std::array<double, kNumParams>;

inline JacobianScales jacobian_scales(const ParameterBox& box) {
  JacobianScales s{};
  for (int i = 0; i < kNumParams; ++i) s[static_cast<std::size_t>(i)] = box.width(i);
  return s;
}

inline JacobianScales default_jacobian_scales() { return jacobian_scales(default_parameter_box()); }

/// Complex reflection coefficient of the tri-layer joint at angular
/// frequency `omega` (rad/s). Both interfaces share the spring stiffness
/// K = log_base^log_k0.
inline std::complex<double> reflection_coefficient(const ParameterVector& theta, double omega,
                                                   const MaterialSpec& mat, double log_base = 10.0) {
  using C = std::complex<double>;
  const double stiffness = std::pow(log_base, theta.log_k0);
  const C k1(omega / mat.c_l1, mat.alpha1);
  const C k_adh(omega / mat.c_l_adh, theta.alpha0);
  const C g1 = mat.e1 * k1;
  const C g_adh = mat.e_adh * k_adh;

  const C cn = g1 * g1 / stiffness;
  const C cd = 2.0 * g1 * g_adh * (1.0 + g1 / stiffness);
  const C sn = g1 * g1 - g_adh * g_adh + (g1 * g_adh / stiffness) * (g1 * g_adh / stiffness);
  const C sd = g1 * g1 + g_adh * g_adh + (g1 * g_adh * g_adh / stiffness) * (2.0 + g1 / stiffness);

  const C arg = k_adh * theta.l_bl;
  const C num = cn * std::cos(arg) + C(0.0, 1.0) * sn * std::sin(arg);
  const C den = cd * std::cos(arg) + C(0.0, 1.0) * sd * std::sin(arg);
  if (std::abs(den) < 1.0e-300) {
    throw NonFiniteResult("reflection_coefficient: denominator underflow (unphysical parameters)");
  }
  const C r = num / den;
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
    throw NonFiniteResult("reflection_coefficient: non-finite result");
  }
  return r;
}

/// Phase response in degrees: principal arg of the reflection coefficient,
/// unwrapped along the (increasing) grid, plus the affine correction
/// a*omega + b.
inline std::vector<double> phase_response(const ParameterVector& theta, const FrequencyGrid& grid,
                                          const MaterialSpec& mat, double log_base = 10.0) {
  constexpr double kRadToDeg = 57.295779513082320876798154814105;
  std::vector<double> phases(grid.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double raw = kRadToDeg * std::arg(reflection_coefficient(theta, grid.omegas[i], mat, log_base));
    double unwrapped = raw;
    if (i > 0) {
      unwrapped += 360.0 * std::round((prev - raw) / 360.0);
    }
    prev = unwrapped;
    phases[i] = unwrapped + theta.a * grid.omegas[i] + theta.b;
  }
  return phases;
}

namespace detail {

// A small parameter change can relabel the unwrapped curve by a whole number
// of turns at the anchor point; remove that offset before differencing.
inline void align_to(const std::vector<double>& base, std::vector<double>& curve) {
  const double shift = 360.0 * std::round((curve[0] - base[0]) / 360.0);
  if (shift != 0.0) {
    for (double& v : curve) v -= shift;
  }
}

}  // namespace detail

/// Jacobian of `phase_response` by central finite differences, one column
/// per parameter in the fixed order. Step sizes are
/// max(|theta_j|, scale_j) * eps^(1/3).
inline Matrix5d jacobian(const ParameterVector& theta, const FrequencyGrid& grid, const MaterialSpec& mat,
                         const JacobianScales& scales, double log_base = 10.0) {
  const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
  const std::size_t n = grid.size();
  Matrix5d jac(static_cast<Eigen::Index>(n), kNumParams);
  const std::vector<double> base = phase_response(theta, grid, mat, log_base);
  const auto t = theta.to_array();
  for (int j = 0; j < kNumParams; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    double h = std::max(std::fabs(t[ju]), scales[ju]) * cbrt_eps;
    if (h == 0.0) h = cbrt_eps;
    auto tp = t;
    auto tm = t;
    tp[ju] += h;
    tm[ju] -= h;
    std::vector<double> fp = phase_response(ParameterVector::from_array(tp), grid, mat, log_base);
    std::vector<double> fm = phase_response(ParameterVector::from_array(tm), grid, mat, log_base);
    detail::align_to(base, fp);
    detail::align_to(base, fm);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = (fp[i] - fm[i]) / (2.0 * h);
      if (!std::isfinite(d)) {
        throw JacobianFailure("jacobian: non-finite difference quotient");
      }
      jac(static_cast<Eigen::Index>(i), j) = d;
    }
  }
  return jac;
}

/// First-order expansion of the forward model at `theta_hat`:
/// g(theta) = K theta + offset, with y_tilde = y - offset.
struct LinearizedModel {
  Matrix5d k_matrix;
  Eigen::VectorXd offset;
  Eigen::VectorXd y_tilde;
  ParameterVector theta_hat;

  Eigen::Index n() const { return k_matrix.rows(); }
};

inline LinearizedModel linearize(const ParameterVector& theta_hat, const Eigen::VectorXd& y,
                                 const FrequencyGrid& grid, const MaterialSpec& mat,
                                 const JacobianScales& scales, double log_base = 10.0) {
  LinearizedModel lin;
  lin.theta_hat = theta_hat;
  lin.k_matrix = jacobian(theta_hat, grid, mat, scales, log_base);
  const std::vector<double> f = phase_response(theta_hat, grid, mat, log_base);
  const Eigen::Map<const Eigen::VectorXd> f_vec(f.data(), static_cast<Eigen::Index>(f.size()));
  Eigen::Matrix<double, kNumParams, 1> th;
  const auto t = theta_hat.to_array();
  for (int i = 0; i < kNumParams; ++i) th(i) = t[static_cast<std::size_t>(i)];
  lin.offset = f_vec - lin.k_matrix * th;
  lin.y_tilde = y - lin.offset;
  return lin;
}

}  // namespace bondgauge
