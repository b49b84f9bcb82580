#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "bondgauge/errors.hpp"
#include "bondgauge/forward_model.hpp"
#include "bondgauge/rng.hpp"
#include "bondgauge/types.hpp"

namespace bondgauge {

/// Result of the box-constrained nonlinear least-squares fit.
struct NlsFit {
  ParameterVector theta_hat;
  double residual_norm_sq = 0.0;  // S(theta_hat), deg^2
  bool converged = false;
  int n_starts_used = 0;
  int iterations = 0;  // iterations of the winning start
};

struct NlsOptions {
  int max_iterations = 500;
  double pg_tol = 1.0e-8;  // projected-gradient threshold, scaled coordinates
};

namespace detail {

struct LocalNlsResult {
  Eigen::Matrix<double, kNumParams, 1> u;
  double objective = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

// Objective and solver work in unit-box coordinates theta = lower + u .* width,
// which keeps the Levenberg-Marquardt system sanely conditioned across the
// wildly different parameter magnitudes.
class ScaledNlsProblem {
 public:
  ScaledNlsProblem(const Eigen::VectorXd& y, const FrequencyGrid& grid, const ParameterBox& box,
                   const MaterialSpec& mat, double log_base)
      : y_(y), grid_(grid), box_(box), mat_(mat), log_base_(log_base), scales_(jacobian_scales(box)) {
    for (int i = 0; i < kNumParams; ++i) widths_(i) = box.width(i);
  }

  ParameterVector to_theta(const Eigen::Matrix<double, kNumParams, 1>& u) const {
    std::array<double, kNumParams> t{};
    for (int i = 0; i < kNumParams; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      t[iu] = box_.lower[iu] + u(i) * widths_(i);
    }
    return ParameterVector::from_array(t);
  }

  double objective(const Eigen::Matrix<double, kNumParams, 1>& u, Eigen::VectorXd* residual) const {
    const std::vector<double> f = phase_response(to_theta(u), grid_, mat_, log_base_);
    double s = 0.0;
    if (residual) residual->resize(y_.size());
    for (Eigen::Index i = 0; i < y_.size(); ++i) {
      const double r = y_(i) - f[static_cast<std::size_t>(i)];
      if (residual) (*residual)(i) = r;
      s += r * r;
    }
    return s;
  }

  // Jacobian of the residual model in scaled coordinates: columns of the
  // phase-response Jacobian times the box widths.
  Eigen::MatrixXd scaled_jacobian(const Eigen::Matrix<double, kNumParams, 1>& u) const {
    Eigen::MatrixXd j = jacobian(to_theta(u), grid_, mat_, scales_, log_base_);
    for (int c = 0; c < kNumParams; ++c) j.col(c) *= widths_(c);
    return j;
  }

  LocalNlsResult solve_from(const Eigen::Matrix<double, kNumParams, 1>& u0, const NlsOptions& opts) const {
    LocalNlsResult res;
    Eigen::Matrix<double, kNumParams, 1> u = u0.cwiseMax(0.0).cwiseMin(1.0);
    Eigen::VectorXd r;
    double s = objective(u, &r);
    if (!std::isfinite(s)) {
      res.u = u;
      res.objective = s;
      return res;
    }

    double lambda = 1.0e-3;
    int stagnant = 0;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
      res.iterations = iter + 1;
      Eigen::MatrixXd j;
      try {
        j = scaled_jacobian(u);
      } catch (const JacobianFailure&) {
        break;
      }
      const Eigen::Matrix<double, kNumParams, 1> grad = -2.0 * (j.transpose() * r);
      const double pg = ((u - grad).cwiseMax(0.0).cwiseMin(1.0) - u).lpNorm<Eigen::Infinity>();
      if (pg < opts.pg_tol * (1.0 + std::fabs(s))) {
        res.converged = true;
        break;
      }

      const Eigen::Matrix<double, kNumParams, kNumParams> jtj = j.transpose() * j;
      const Eigen::Matrix<double, kNumParams, 1> jtr = j.transpose() * r;
      Eigen::Matrix<double, kNumParams, 1> damping = jtj.diagonal();
      const double diag_floor = 1.0e-12 * std::max(1.0, damping.maxCoeff());
      damping = damping.cwiseMax(diag_floor);

      bool accepted = false;
      for (int attempt = 0; attempt < 25; ++attempt) {
        Eigen::Matrix<double, kNumParams, kNumParams> m = jtj;
        m.diagonal() += lambda * damping;
        const Eigen::Matrix<double, kNumParams, 1> step = m.ldlt().solve(jtr);
        if (!step.allFinite()) {
          lambda *= 4.0;
          continue;
        }
        const Eigen::Matrix<double, kNumParams, 1> u_new = (u + step).cwiseMax(0.0).cwiseMin(1.0);
        Eigen::VectorXd r_new;
        const double s_new = objective(u_new, &r_new);
        if (std::isfinite(s_new) && s_new < s) {
          stagnant = (s - s_new <= 1.0e-14 * (s + 1.0e-300)) ? stagnant + 1 : 0;
          u = u_new;
          r.swap(r_new);
          s = s_new;
          lambda = std::max(lambda / 3.0, 1.0e-12);
          accepted = true;
          break;
        }
        lambda *= 4.0;
        if (lambda > 1.0e15) break;
      }
      if (!accepted || stagnant >= 4) {
        // No representable progress left at this scale.
        break;
      }
    }
    res.u = u;
    res.objective = s;
    return res;
  }

 private:
  const Eigen::VectorXd& y_;
  const FrequencyGrid& grid_;
  const ParameterBox& box_;
  const MaterialSpec& mat_;
  double log_base_;
  JacobianScales scales_;
  Eigen::Matrix<double, kNumParams, 1> widths_;
};

// Latin hypercube start points on the unit box, deterministic in the seed.
inline std::vector<Eigen::Matrix<double, kNumParams, 1>> latin_hypercube_starts(int count,
                                                                                std::uint64_t seed) {
  std::vector<Eigen::Matrix<double, kNumParams, 1>> pts(static_cast<std::size_t>(count));
  if (count <= 0) return pts;
  GaussianStream stream(seed);
  std::array<std::vector<int>, kNumParams> perms;
  for (auto& perm : perms) {
    perm.resize(static_cast<std::size_t>(count));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = count - 1; i > 0; --i) {
      const auto j = static_cast<int>(stream.next_u64() % static_cast<std::uint64_t>(i + 1));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
  }
  for (int s = 0; s < count; ++s) {
    for (int d = 0; d < kNumParams; ++d) {
      const double stratum = perms[static_cast<std::size_t>(d)][static_cast<std::size_t>(s)];
      pts[static_cast<std::size_t>(s)](d) = (stratum + stream.next_uniform()) / static_cast<double>(count);
    }
  }
  return pts;
}

}  // namespace detail

/// Box-constrained nonlinear least-squares fit of the phase model, taking the
/// best of `starts` projected Levenberg-Marquardt runs (midpoint start plus
/// Latin-hypercube starts). Ties in the objective break toward the lowest
/// start index.
inline NlsFit fit_nls(const Eigen::VectorXd& y, const FrequencyGrid& grid, const ParameterBox& box,
                      const MaterialSpec& mat, int starts, std::uint64_t seed, double log_base = 10.0,
                      const NlsOptions& opts = {}) {
  if (starts < 1) throw OptimizerFailure("fit_nls: need at least one start");
  box.validate();
  const detail::ScaledNlsProblem problem(y, grid, box, mat, log_base);

  std::vector<Eigen::Matrix<double, kNumParams, 1>> start_points;
  start_points.reserve(static_cast<std::size_t>(starts));
  start_points.push_back(Eigen::Matrix<double, kNumParams, 1>::Constant(0.5));
  for (auto& p : detail::latin_hypercube_starts(starts - 1, detail::mix(seed, 0x1b5u))) {
    start_points.push_back(p);
  }

  detail::LocalNlsResult best;
  int best_index = -1;
  for (int s = 0; s < starts; ++s) {
    const detail::LocalNlsResult run = problem.solve_from(start_points[static_cast<std::size_t>(s)], opts);
    if (!std::isfinite(run.objective)) continue;
    if (best_index < 0 || run.objective < best.objective - 1.0e-12) {
      best = run;
      best_index = s;
    }
  }
  if (best_index < 0) {
    throw OptimizerFailure("fit_nls: every start produced a non-finite objective");
  }

  NlsFit fit;
  fit.theta_hat = box.clip(problem.to_theta(best.u));
  fit.residual_norm_sq = best.objective;
  fit.converged = best.converged;
  fit.n_starts_used = starts;
  fit.iterations = best.iterations;
  return fit;
}

/// Unconstrained least-squares quantities of the linearized model.
struct LinearFit {
  Eigen::Matrix<double, kNumParams, 1> theta_ls;
  double residual_norm_sq_lin = 0.0;                       // S^l at theta_ls
  Eigen::Matrix<double, kNumParams, kNumParams> gram_inverse;  // (K'K)^-1
  double sigma_hat = 0.0;                                  // sqrt(S^l / (n - p))
};

/// Solve the linear model by SVD; refuses rank-deficient designs.
inline LinearFit fit_linear(const LinearizedModel& lin) {
  const Eigen::Index n = lin.n();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(lin.k_matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1.0e-12 * sv(0)) {
    throw RankDeficient("fit_linear: linearized model matrix is rank deficient");
  }
  LinearFit fit;
  fit.theta_ls = svd.solve(lin.y_tilde);
  fit.residual_norm_sq_lin = (lin.y_tilde - lin.k_matrix * fit.theta_ls).squaredNorm();
  const Eigen::Matrix<double, kNumParams, 1> inv_sq = sv.array().square().inverse();
  fit.gram_inverse = svd.matrixV() * inv_sq.asDiagonal() * svd.matrixV().transpose();
  fit.sigma_hat = std::sqrt(fit.residual_norm_sq_lin / static_cast<double>(n - kNumParams));
  return fit;
}

}  // namespace bondgauge
