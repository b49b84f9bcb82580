#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace bondgauge {

struct BoxQpResult {
  Eigen::VectorXd x;
  double objective = 0.0;           // 0.5 x'Ax + c'x
  double projected_gradient = 0.0;  // ||clip(x - g) - x||_inf
  int iterations = 0;
  bool converged = false;
};

/// Minimize 0.5 x'Ax + c'x over the box [lower, upper] for symmetric
/// positive semidefinite A. Primal active-set iteration with exact Newton
/// solves on the free subspace; dimension is expected to be small.
inline BoxQpResult box_qp_minimize(const Eigen::MatrixXd& A, const Eigen::VectorXd& c,
                                   const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                   const Eigen::VectorXd& x0, double tol = 1.0e-10, int max_iter = 200) {
  const Eigen::Index d = c.size();
  BoxQpResult out;
  Eigen::VectorXd x = x0.cwiseMax(lower).cwiseMin(upper);
  const double diag_scale = std::max(A.diagonal().cwiseAbs().maxCoeff(), 1.0e-300);

  const auto projected_gradient_norm = [&](const Eigen::VectorXd& xx, const Eigen::VectorXd& g) {
    return ((xx - g).cwiseMax(lower).cwiseMin(upper) - xx).lpNorm<Eigen::Infinity>();
  };

  Eigen::VectorXd g = A * x + c;
  for (int iter = 0; iter < max_iter; ++iter) {
    out.iterations = iter + 1;
    const double pg = projected_gradient_norm(x, g);
    if (pg <= tol) {
      out.converged = true;
      break;
    }

    // Variables pinned at a bound with a correctly signed multiplier stay fixed.
    std::vector<Eigen::Index> free;
    free.reserve(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
      const bool at_lo = x(i) <= lower(i);
      const bool at_hi = x(i) >= upper(i);
      if (lower(i) == upper(i)) continue;
      if (at_lo && g(i) >= 0.0) continue;
      if (at_hi && g(i) <= 0.0) continue;
      free.push_back(i);
    }
    if (free.empty()) {
      out.converged = true;
      break;
    }

    const auto nf = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd aff(nf, nf);
    Eigen::VectorXd gf(nf);
    for (Eigen::Index r = 0; r < nf; ++r) {
      gf(r) = g(free[static_cast<std::size_t>(r)]);
      for (Eigen::Index s = 0; s < nf; ++s) {
        aff(r, s) = A(free[static_cast<std::size_t>(r)], free[static_cast<std::size_t>(s)]);
      }
    }
    Eigen::VectorXd df;
    {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(aff);
      df = ldlt.solve(-gf);
      if (!df.allFinite() || gf.dot(df) > 0.0) {
        // Semidefinite subspace: fall back to a ridge solve.
        Eigen::MatrixXd ridged = aff;
        ridged.diagonal().array() += 1.0e-12 * diag_scale;
        df = Eigen::LDLT<Eigen::MatrixXd>(ridged).solve(-gf);
      }
    }

    // Longest feasible step along the subspace Newton direction.
    double alpha_max = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < nf; ++r) {
      const Eigen::Index i = free[static_cast<std::size_t>(r)];
      if (df(r) > 0.0) {
        alpha_max = std::min(alpha_max, (upper(i) - x(i)) / df(r));
      } else if (df(r) < 0.0) {
        alpha_max = std::min(alpha_max, (lower(i) - x(i)) / df(r));
      }
    }
    const double alpha = std::min(1.0, alpha_max);
    if (!(alpha > 0.0)) {
      // Numerically stuck on a face; accept the current KKT residual.
      break;
    }
    for (Eigen::Index r = 0; r < nf; ++r) {
      const Eigen::Index i = free[static_cast<std::size_t>(r)];
      x(i) += alpha * df(r);
      if (x(i) < lower(i)) x(i) = lower(i);
      if (x(i) > upper(i)) x(i) = upper(i);
    }
    // Snap to a bound when the step lands exactly on it.
    if (alpha == alpha_max) {
      for (Eigen::Index r = 0; r < nf; ++r) {
        const Eigen::Index i = free[static_cast<std::size_t>(r)];
        if (std::fabs(x(i) - lower(i)) <= 1.0e-15 * (std::fabs(lower(i)) + 1.0)) x(i) = lower(i);
        if (std::fabs(x(i) - upper(i)) <= 1.0e-15 * (std::fabs(upper(i)) + 1.0)) x(i) = upper(i);
      }
    }
    g = A * x + c;
  }

  out.x = x;
  g = A * x + c;
  out.projected_gradient = projected_gradient_norm(x, g);
  out.objective = 0.5 * x.dot(A * x) + c.dot(x);
  if (out.projected_gradient <= tol) out.converged = true;
  return out;
}

}  // namespace bondgauge
