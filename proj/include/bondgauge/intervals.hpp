#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "bondgauge/box_qp.hpp"
#include "bondgauge/distributions.hpp"
#include "bondgauge/errors.hpp"
#include "bondgauge/estimation.hpp"
#include "bondgauge/forward_model.hpp"
#include "bondgauge/types.hpp"

namespace bondgauge {

/// Selects the scalar quantity of interest h'theta.
struct QoiSelector {
  Eigen::Matrix<double, kNumParams, 1> h;

  static QoiSelector log_stiffness() {
    QoiSelector s;
    s.h.setZero();
    s.h(0) = 1.0;
    return s;
  }
};

/// Confidence-set cutoff for the linearized residual with unknown variance:
/// the box-constrained residual minimum inflated by the F-distribution factor.
inline double calibrate_q(double lin_residual_sq, int n, int p, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("calibrate_q: gamma must lie in (0, 1)");
  if (!(n > p && p >= 1)) throw DomainError("calibrate_q: need n > p >= 1");
  if (!(lin_residual_sq >= 0.0)) throw DomainError("calibrate_q: residual must be nonnegative");
  const double ratio = static_cast<double>(p) / static_cast<double>(n - p);
  return lin_residual_sq * (1.0 + ratio * f_quantile(p, n - p, gamma));
}

/// Generic endpoint problem: optimize a linear functional over
/// {theta in [lower, upper] : ||y_tilde - K theta||^2 <= q}.
struct EllipsoidBoxProblem {
  Eigen::MatrixXd k;
  Eigen::VectorXd y_tilde;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  double q = 0.0;
};

struct EndpointDiagnostics {
  double lambda = 0.0;
  int lambda_evaluations = 0;
  double constraint_violation = 0.0;  // max(0, Q(theta) - q)
  double stationarity = 0.0;          // projected gradient of the inner problem
};

namespace detail {

struct ScaledEndpointProblem {
  Eigen::MatrixXd k_u;      // K * diag(width)
  Eigen::VectorXd y0;       // y_tilde - K * lower
  Eigen::VectorXd h_u;      // h .* width
  Eigen::MatrixXd a_q;      // 2 K_u' K_u
  Eigen::VectorXd c_q;      // -2 K_u' y0
  Eigen::VectorXd unit_lo;  // zeros
  Eigen::VectorXd unit_hi;  // ones
  double h_offset = 0.0;    // h . lower

  double quad(const Eigen::VectorXd& u) const { return (y0 - k_u * u).squaredNorm(); }
};

inline ScaledEndpointProblem scale_endpoint_problem(const EllipsoidBoxProblem& prob,
                                                    const Eigen::VectorXd& h) {
  const Eigen::Index d = prob.lower.size();
  ScaledEndpointProblem sp;
  Eigen::VectorXd width = prob.upper - prob.lower;
  sp.k_u = prob.k;
  for (Eigen::Index j = 0; j < d; ++j) sp.k_u.col(j) *= width(j);
  sp.y0 = prob.y_tilde - prob.k * prob.lower;
  sp.h_u = h.cwiseProduct(width);
  sp.a_q = 2.0 * (sp.k_u.transpose() * sp.k_u);
  sp.c_q = -2.0 * (sp.k_u.transpose() * sp.y0);
  sp.unit_lo = Eigen::VectorXd::Zero(d);
  sp.unit_hi = Eigen::VectorXd::Ones(d);
  sp.h_offset = h.dot(prob.lower);
  return sp;
}

// Inner penalized problem: min h_u . u + lambda (Q(u) - q) over the unit box.
inline BoxQpResult endpoint_inner(const ScaledEndpointProblem& sp, double lambda,
                                  const Eigen::VectorXd& warm) {
  const Eigen::MatrixXd a = lambda * sp.a_q;
  const Eigen::VectorXd c = sp.h_u + lambda * sp.c_q;
  const double tol = 1.0e-10 * (1.0 + c.lpNorm<Eigen::Infinity>());
  return box_qp_minimize(a, c, sp.unit_lo, sp.unit_hi, warm, tol, 400);
}

// Limit of the inner problem as lambda -> 0+: honor the linear objective
// coordinatewise, then settle zero-coefficient coordinates by residual.
inline Eigen::VectorXd endpoint_lambda_zero(const ScaledEndpointProblem& sp) {
  const Eigen::Index d = sp.h_u.size();
  Eigen::VectorXd lo = sp.unit_lo;
  Eigen::VectorXd hi = sp.unit_hi;
  Eigen::VectorXd u(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (sp.h_u(i) > 0.0) {
      u(i) = 0.0;
      lo(i) = hi(i) = 0.0;
    } else if (sp.h_u(i) < 0.0) {
      u(i) = 1.0;
      lo(i) = hi(i) = 1.0;
    } else {
      u(i) = 0.5;
    }
  }
  const double tol = 1.0e-12 * (1.0 + sp.c_q.lpNorm<Eigen::Infinity>());
  return box_qp_minimize(sp.a_q, sp.c_q, lo, hi, u, tol, 400).x;
}

struct EndpointSolution {
  double value = 0.0;
  Eigen::VectorXd theta;
  EndpointDiagnostics diag;
};

// Minimize h'theta over the ellipsoid-box intersection. Bisection on the
// quadratic-constraint multiplier; every inner problem is a box QP that is
// strictly convex for lambda > 0 when K has full column rank.
inline EndpointSolution minimize_linear_over_set(const EllipsoidBoxProblem& prob,
                                                 const Eigen::VectorXd& h) {
  const ScaledEndpointProblem sp = scale_endpoint_problem(prob, h);
  const double q = prob.q;
  const double tau = 1.0e-8 * q + 1.0e-13 * (1.0 + sp.y0.squaredNorm());

  EndpointSolution sol;
  auto finish = [&](const Eigen::VectorXd& u, double lambda, int evals, double stationarity) {
    sol.theta = prob.lower + (prob.upper - prob.lower).cwiseProduct(u);
    sol.value = sp.h_offset + sp.h_u.dot(u);
    sol.diag.lambda = lambda;
    sol.diag.lambda_evaluations = evals;
    sol.diag.constraint_violation = std::max(0.0, sp.quad(u) - q);
    sol.diag.stationarity = stationarity;
  };

  // Feasibility: the box-constrained quadratic minimum must fit under q.
  const double quad_tol = 1.0e-12 * (1.0 + sp.c_q.lpNorm<Eigen::Infinity>());
  const BoxQpResult qmin = box_qp_minimize(sp.a_q, sp.c_q, sp.unit_lo, sp.unit_hi,
                                           Eigen::VectorXd::Constant(sp.h_u.size(), 0.5), quad_tol, 400);
  const double s_min = sp.quad(qmin.x);
  if (s_min > q + tau) {
    throw InfeasibleSet("ssb_endpoints: confidence set does not intersect the box (q below residual minimum)");
  }
  if (s_min >= q - tau) {
    // The feasible set collapses to (numerically) the residual minimizer.
    finish(qmin.x, std::numeric_limits<double>::infinity(), 1, qmin.projected_gradient);
    return sol;
  }

  // lambda = 0: pure linear objective. Feasible means the constraint is slack.
  int evals = 1;
  const Eigen::VectorXd u0 = endpoint_lambda_zero(sp);
  if (sp.quad(u0) - q <= tau) {
    finish(u0, 0.0, evals, 0.0);
    return sol;
  }

  // Bracket the multiplier geometrically, then bisect in log space.
  const double lambda_ref =
      (sp.h_u.lpNorm<Eigen::Infinity>() + 1.0e-300) / (q + sp.y0.squaredNorm() + 1.0e-300);
  double lambda_lo = lambda_ref * 1.0e-9;
  double lambda_hi = lambda_lo;
  Eigen::VectorXd warm = u0;
  BoxQpResult inner;
  double g_hi = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 300; ++k) {
    inner = endpoint_inner(sp, lambda_hi, warm);
    ++evals;
    warm = inner.x;
    g_hi = sp.quad(inner.x) - q;
    if (g_hi <= tau) break;
    lambda_lo = lambda_hi;
    lambda_hi *= 8.0;
  }
  if (g_hi > tau) {
    throw SolverStall("ssb_endpoints: could not bracket the constraint multiplier");
  }
  if (std::fabs(g_hi) <= tau) {
    finish(inner.x, lambda_hi, evals, inner.projected_gradient);
    return sol;
  }

  Eigen::VectorXd best_u = inner.x;  // feasible side
  double best_lambda = lambda_hi;
  double best_stat = inner.projected_gradient;
  for (int k = 0; k < 240; ++k) {
    const double mid = std::sqrt(lambda_lo * lambda_hi);
    inner = endpoint_inner(sp, mid, warm);
    ++evals;
    warm = inner.x;
    const double g = sp.quad(inner.x) - q;
    if (std::fabs(g) <= tau) {
      finish(inner.x, mid, evals, inner.projected_gradient);
      return sol;
    }
    if (g > 0.0) {
      lambda_lo = mid;
    } else {
      lambda_hi = mid;
      best_u = inner.x;
      best_lambda = mid;
      best_stat = inner.projected_gradient;
    }
    if (lambda_hi - lambda_lo <= 1.0e-15 * lambda_hi) break;
  }
  // Bracket exhausted: return the best feasible iterate (value is within the
  // bracket's resolution of the true endpoint).
  finish(best_u, best_lambda, evals, best_stat);
  return sol;
}

inline EndpointSolution maximize_linear_over_set(const EllipsoidBoxProblem& prob,
                                                 const Eigen::VectorXd& h) {
  EndpointSolution sol = minimize_linear_over_set(prob, -h);
  sol.value = -sol.value;
  return sol;
}

}  // namespace detail

/// Endpoints of the QoI over the ellipsoid-box feasible set; `level` is
/// carried through to the returned interval.
inline ConfidenceInterval ssb_endpoints_generic(const EllipsoidBoxProblem& prob, const Eigen::VectorXd& h,
                                                double level = 0.95,
                                                EndpointDiagnostics* diag_lo = nullptr,
                                                EndpointDiagnostics* diag_hi = nullptr) {
  const detail::EndpointSolution lo = detail::minimize_linear_over_set(prob, h);
  const detail::EndpointSolution hi = detail::maximize_linear_over_set(prob, h);
  if (diag_lo) *diag_lo = lo.diag;
  if (diag_hi) *diag_hi = hi.diag;
  ConfidenceInterval ci;
  ci.lower = std::min(lo.value, hi.value);
  ci.upper = std::max(lo.value, hi.value);
  ci.level = level;
  ci.method = IntervalMethod::ssb;
  return ci;
}

inline ConfidenceInterval ssb_endpoints(const LinearizedModel& lin, const ParameterBox& box, double q,
                                        const QoiSelector& h, double level = 0.95) {
  EllipsoidBoxProblem prob;
  prob.k = lin.k_matrix;
  prob.y_tilde = lin.y_tilde;
  prob.lower = Eigen::Map<const Eigen::Matrix<double, kNumParams, 1>>(box.lower.data());
  prob.upper = Eigen::Map<const Eigen::Matrix<double, kNumParams, 1>>(box.upper.data());
  prob.q = q;
  return ssb_endpoints_generic(prob, h.h, level);
}

/// Box-constrained minimum of the linearized residual, min over the box of
/// ||y_tilde - K theta||^2.
inline double box_constrained_lin_min(const LinearizedModel& lin, const ParameterBox& box,
                                      Eigen::Matrix<double, kNumParams, 1>* minimizer = nullptr) {
  EllipsoidBoxProblem prob;
  prob.k = lin.k_matrix;
  prob.y_tilde = lin.y_tilde;
  prob.lower = Eigen::Map<const Eigen::Matrix<double, kNumParams, 1>>(box.lower.data());
  prob.upper = Eigen::Map<const Eigen::Matrix<double, kNumParams, 1>>(box.upper.data());
  const detail::ScaledEndpointProblem sp =
      detail::scale_endpoint_problem(prob, Eigen::Matrix<double, kNumParams, 1>::Zero());
  const double tol = 1.0e-12 * (1.0 + sp.c_q.lpNorm<Eigen::Infinity>());
  const BoxQpResult res = box_qp_minimize(sp.a_q, sp.c_q, sp.unit_lo, sp.unit_hi,
                                          Eigen::VectorXd::Constant(kNumParams, 0.5), tol, 400);
  if (minimizer) *minimizer = prob.lower + (prob.upper - prob.lower).cwiseProduct(res.x);
  return sp.quad(res.x);
}

struct SsbDiagnostics {
  NlsFit fit;
  double lin_residual_min = 0.0;  // min over the box of the linearized residual
  double q = 0.0;
  EndpointDiagnostics endpoint_lower;
  EndpointDiagnostics endpoint_upper;
};

/// Full interval pipeline: constrained NLS fit, linearization, F-calibrated
/// cutoff, then the two endpoint optimizations.
inline ConfidenceInterval ssb_interval(const Eigen::VectorXd& y, const FrequencyGrid& grid,
                                       const ParameterBox& box, const MaterialSpec& mat, double gamma,
                                       const QoiSelector& h, std::uint64_t seed, int starts = 8,
                                       double log_base = 10.0, SsbDiagnostics* diag = nullptr,
                                       const NlsOptions& opts = {}) {
  grid.validate();
  const NlsFit fit = fit_nls(y, grid, box, mat, starts, seed, log_base, opts);
  const LinearizedModel lin = linearize(fit.theta_hat, y, grid, mat, jacobian_scales(box), log_base);
  const double s_min = box_constrained_lin_min(lin, box);
  const double q = calibrate_q(s_min, static_cast<int>(grid.size()), kNumParams, gamma);

  EllipsoidBoxProblem prob;
  prob.k = lin.k_matrix;
  prob.y_tilde = lin.y_tilde;
  prob.lower = Eigen::Map<const Eigen::Matrix<double, kNumParams, 1>>(box.lower.data());
  prob.upper = Eigen::Map<const Eigen::Matrix<double, kNumParams, 1>>(box.upper.data());
  prob.q = q;
  EndpointDiagnostics dlo;
  EndpointDiagnostics dhi;
  ConfidenceInterval ci = ssb_endpoints_generic(prob, h.h, 1.0 - gamma, &dlo, &dhi);
  if (diag) {
    diag->fit = fit;
    diag->lin_residual_min = s_min;
    diag->q = q;
    diag->endpoint_lower = dlo;
    diag->endpoint_upper = dhi;
  }
  return ci;
}

/// Classical t-interval for h'theta from the unconstrained linear fit,
/// intersected with the box's projection onto the QoI. An empty intersection
/// collapses to the nearest box endpoint and is flagged degenerate.
inline ConfidenceInterval ls_interval(const LinearizedModel& lin, const LinearFit& fit,
                                      const ParameterBox& box, double gamma, const QoiSelector& h) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("ls_interval: gamma must lie in (0, 1)");
  const int n = static_cast<int>(lin.n());
  const double center = h.h.dot(fit.theta_ls);
  const double se = fit.sigma_hat * std::sqrt(h.h.dot(fit.gram_inverse * h.h));
  const double half_width = t_quantile(n - kNumParams, 0.5 * gamma) * se;

  double box_lo = 0.0;
  double box_hi = 0.0;
  for (int i = 0; i < kNumParams; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const double hi_coef = h.h(i);
    box_lo += hi_coef >= 0.0 ? hi_coef * box.lower[iu] : hi_coef * box.upper[iu];
    box_hi += hi_coef >= 0.0 ? hi_coef * box.upper[iu] : hi_coef * box.lower[iu];
  }

  ConfidenceInterval ci;
  ci.level = 1.0 - gamma;
  ci.method = IntervalMethod::ls;
  ci.lower = std::max(center - half_width, box_lo);
  ci.upper = std::min(center + half_width, box_hi);
  if (ci.lower > ci.upper) {
    const double point = center > box_hi ? box_hi : box_lo;
    ci.lower = ci.upper = point;
    ci.degenerate = true;
  }
  return ci;
}

}  // namespace bondgauge
