#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "bondgauge/errors.hpp"
#include "bondgauge/types.hpp"

namespace bondgauge {

namespace detail {

inline constexpr double kProbEps = 1.0e-15;
inline constexpr int kMaxSeriesIter = 10000;

// Regularized lower incomplete gamma P(a, x) by series expansion (x < a + 1).
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kMaxSeriesIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kProbEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by continued fraction (x >= a + 1).
inline double gamma_q_cf(double a, double x) {
  constexpr double kFpMin = 1.0e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxSeriesIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kProbEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double regularized_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

inline double regularized_gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double beta_cf(double a, double b, double x) {
  constexpr double kFpMin = 1.0e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxSeriesIter; ++m) {
    const double dm = static_cast<double>(m);
    const double m2 = 2.0 * dm;
    double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kProbEps) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a, b).
inline double regularized_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

// Safeguarded Newton inversion of a monotone CDF on a bracketing interval.
// `cdf` must be nondecreasing; `log_pdf` may return -inf where the density
// vanishes (forces a bisection step).
template <class Cdf, class LogPdf>
double invert_cdf(const Cdf& cdf, const LogPdf& log_pdf, double target, double lo, double hi) {
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = cdf(x) - target;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double lp = log_pdf(x);
    double next = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(lp)) {
      next = x - f * std::exp(-lp);
    }
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    const double step = std::fabs(next - x);
    x = next;
    if (step <= 1.0e-15 * (std::fabs(x) + 1.0e-300) || hi - lo <= 1.0e-15 * (std::fabs(x) + 1.0e-300)) {
      break;
    }
  }
  return x;
}

inline void require_tail_prob(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(what) + ": tail probability must lie in (0, 1)");
  }
}

}  // namespace detail

/// Upper-tail chi-squared quantile: returns x with P(Chi2_dof > x) = upper_tail_prob.
inline double chi2_quantile(int dof, double upper_tail_prob) {
  if (dof < 1) throw DomainError("chi2_quantile: dof must be >= 1");
  detail::require_tail_prob(upper_tail_prob, "chi2_quantile");
  const double a = 0.5 * static_cast<double>(dof);
  const double target = 1.0 - upper_tail_prob;
  const auto cdf = [a](double x) { return detail::regularized_gamma_p(a, 0.5 * x); };
  const auto log_pdf = [a](double x) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return (a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a);
  };
  // Bracket: mean +- a few standard deviations, expanded as needed.
  double hi = static_cast<double>(dof) + 10.0 * std::sqrt(2.0 * dof) + 10.0;
  while (cdf(hi) < target) hi *= 2.0;
  return detail::invert_cdf(cdf, log_pdf, target, 0.0, hi);
}

/// Upper-tail F quantile with (d1, d2) degrees of freedom.
inline double f_quantile(int d1, int d2, double upper_tail_prob) {
  if (d1 < 1 || d2 < 1) throw DomainError("f_quantile: degrees of freedom must be >= 1");
  detail::require_tail_prob(upper_tail_prob, "f_quantile");
  const double a = 0.5 * static_cast<double>(d1);
  const double b = 0.5 * static_cast<double>(d2);
  const double target = 1.0 - upper_tail_prob;
  // Invert in z = d1 x / (d1 x + d2), where the F CDF is I_z(a, b).
  const auto cdf = [a, b](double z) { return detail::regularized_beta(a, b, z); };
  const auto log_pdf = [a, b](double z) {
    if (z <= 0.0 || z >= 1.0) return -std::numeric_limits<double>::infinity();
    return (a - 1.0) * std::log(z) + (b - 1.0) * std::log1p(-z) + std::lgamma(a + b) - std::lgamma(a) -
           std::lgamma(b);
  };
  const double z = detail::invert_cdf(cdf, log_pdf, target, 0.0, 1.0);
  return static_cast<double>(d2) * z / (static_cast<double>(d1) * (1.0 - z));
}

/// Upper-tail Student t quantile.
inline double t_quantile(int dof, double upper_tail_prob) {
  if (dof < 1) throw DomainError("t_quantile: dof must be >= 1");
  detail::require_tail_prob(upper_tail_prob, "t_quantile");
  if (upper_tail_prob == 0.5) return 0.0;
  if (upper_tail_prob > 0.5) return -t_quantile(dof, 1.0 - upper_tail_prob);
  return std::sqrt(f_quantile(1, dof, 2.0 * upper_tail_prob));
}

/// Lower-tail Beta(a, b) quantile.
inline double beta_quantile(double prob, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("beta_quantile: shape parameters must be positive");
  if (prob <= 0.0) return 0.0;
  if (prob >= 1.0) return 1.0;
  const auto cdf = [a, b](double z) { return detail::regularized_beta(a, b, z); };
  const auto log_pdf = [a, b](double z) {
    if (z <= 0.0 || z >= 1.0) return -std::numeric_limits<double>::infinity();
    return (a - 1.0) * std::log(z) + (b - 1.0) * std::log1p(-z) + std::lgamma(a + b) - std::lgamma(a) -
           std::lgamma(b);
  };
  return detail::invert_cdf(cdf, log_pdf, prob, 0.0, 1.0);
}

/// Success/trial counts for one Monte Carlo coverage cell.
struct BinomialSummary {
  long long successes = 0;
  long long trials = 0;

  void validate() const {
    if (trials < 1 || successes < 0 || successes > trials) {
      throw DomainError("binomial summary: need 0 <= successes <= trials, trials >= 1");
    }
  }
};

/// Exact (Clopper-Pearson) two-sided binomial confidence interval.
inline ConfidenceInterval clopper_pearson(const BinomialSummary& summary, double confidence) {
  summary.validate();
  detail::require_tail_prob(confidence, "clopper_pearson");
  const double tail = 0.5 * (1.0 - confidence);
  const double s = static_cast<double>(summary.successes);
  const double n = static_cast<double>(summary.trials);
  ConfidenceInterval ci;
  ci.level = confidence;
  ci.lower = summary.successes == 0 ? 0.0 : beta_quantile(tail, s, n - s + 1.0);
  ci.upper = summary.successes == summary.trials ? 1.0 : beta_quantile(1.0 - tail, s + 1.0, n - s);
  return ci;
}

}  // namespace bondgauge
