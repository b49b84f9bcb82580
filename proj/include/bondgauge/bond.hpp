#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "bondgauge/distributions.hpp"
#include "bondgauge/errors.hpp"
#include "bondgauge/types.hpp"

namespace bondgauge {

/// Interfacial stiffness / bond strength observation pairs.
struct BondPairs {
  std::vector<double> x;  // log interfacial stiffness
  std::vector<double> z;  // bond strength

  void validate() const {
    if (x.size() != z.size()) throw ConfigError("bond pairs: x and z must have equal length");
    if (x.size() < 3) throw ConfigError("bond pairs: need at least 3 observations");
  }
};

/// Fitted line plus everything needed to evaluate its simultaneous band.
struct BandModel {
  double beta0_hat = 0.0;
  double beta1_hat = 0.0;
  double s = 0.0;  // residual scale, sqrt(RSS / (N - 2))
  Eigen::Matrix2d design_gram_inverse = Eigen::Matrix2d::Zero();
  int n_obs = 0;
  double eta = 0.0;  // band miscoverage
};

/// Split of the overall miscoverage between the stiffness interval and the
/// regression band: (1 - gamma)(1 - eta) = 1 - alpha.
struct BudgetSplit {
  double alpha = 0.0;
  double eta = 0.0;
  double gamma = 0.0;
};

inline BudgetSplit allocate_budget(double alpha, double eta) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw BudgetError("allocate_budget: alpha must lie in (0, 1)");
  if (!(eta > 0.0 && eta < 1.0)) throw BudgetError("allocate_budget: eta must lie in (0, 1)");
  if (eta >= alpha) {
    throw BudgetError("allocate_budget: band miscoverage must be smaller than the overall level");
  }
  return {alpha, eta, (alpha - eta) / (1.0 - eta)};
}

/// Least-squares fit of z on (1, x); intercept included even though the
/// generating model has none.
inline BandModel fit_band(const BondPairs& pairs, double eta) {
  pairs.validate();
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("fit_band: eta must lie in (0, 1)");
  const auto n = static_cast<Eigen::Index>(pairs.x.size());
  const double mean_x = std::accumulate(pairs.x.begin(), pairs.x.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0;
  for (double xi : pairs.x) sxx += (xi - mean_x) * (xi - mean_x);
  if (sxx <= 0.0) throw DegenerateDesign("fit_band: predictor has zero variance");

  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = pairs.x[static_cast<std::size_t>(i)];
    z(i) = pairs.z[static_cast<std::size_t>(i)];
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
  const Eigen::Vector2d beta = qr.solve(z);
  const double rss = (z - design * beta).squaredNorm();

  // (X'X)^-1 from the triangular factor.
  Eigen::Matrix2d r = qr.matrixQR().topLeftCorner<2, 2>();
  r(1, 0) = 0.0;
  const Eigen::Matrix2d r_inv = r.inverse();

  BandModel model;
  model.beta0_hat = beta(0);
  model.beta1_hat = beta(1);
  model.s = std::sqrt(std::max(0.0, rss) / static_cast<double>(n - 2));
  model.design_gram_inverse = r_inv * r_inv.transpose();
  model.n_obs = static_cast<int>(n);
  model.eta = eta;
  return model;
}

/// Simultaneous band at abscissa x: fitted value plus/minus
/// sqrt(2 F_eta(2, N-2)) * s * sqrt(xt' (X'X)^-1 xt).
inline std::pair<double, double> band_at(const BandModel& model, double x) {
  const Eigen::Vector2d xt(1.0, x);
  const double leverage = std::sqrt(std::max(0.0, xt.dot(model.design_gram_inverse * xt)));
  const double center = model.beta0_hat + model.beta1_hat * x;
  const double critical = std::sqrt(2.0 * f_quantile(2, model.n_obs - 2, model.eta));
  const double half_width = critical * model.s * leverage;
  return {center - half_width, center + half_width};
}

/// Map a stiffness interval through the band: hull of the band evaluated at
/// both endpoints. The band edges are concave/convex in x, so endpoint
/// evaluation is exact regardless of the fitted slope's sign.
inline ConfidenceInterval propagate(const BandModel& model, const ConfidenceInterval& stiffness) {
  if (!(stiffness.lower <= stiffness.upper)) {
    throw DomainError("propagate: stiffness interval endpoints out of order");
  }
  const auto [lo_at_l, hi_at_l] = band_at(model, stiffness.lower);
  const auto [lo_at_u, hi_at_u] = band_at(model, stiffness.upper);
  ConfidenceInterval ci;
  ci.lower = std::min(lo_at_l, lo_at_u);
  ci.upper = std::max(hi_at_l, hi_at_u);
  ci.level = stiffness.level * (1.0 - model.eta);
  ci.method = stiffness.method;
  ci.degenerate = stiffness.degenerate;
  return ci;
}

}  // namespace bondgauge
