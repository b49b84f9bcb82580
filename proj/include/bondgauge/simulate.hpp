#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "bondgauge/bond.hpp"
#include "bondgauge/distributions.hpp"
#include "bondgauge/errors.hpp"
#include "bondgauge/estimation.hpp"
#include "bondgauge/forward_model.hpp"
#include "bondgauge/intervals.hpp"
#include "bondgauge/rng.hpp"
#include "bondgauge/types.hpp"

namespace bondgauge {

/// Phase-noise standard deviations (deg) for the coverage experiments.
struct NoiseGrid {
  std::vector<double> sigmas;

  void validate() const {
    if (sigmas.empty()) throw ConfigError("noise grid must not be empty");
    double prev = 0.0;
    for (double s : sigmas) {
      if (!(s > prev)) throw ConfigError("noise grid must be strictly positive and increasing");
      prev = s;
    }
  }

  std::size_t middle_index() const { return sigmas.size() / 2; }

  static NoiseGrid linear(std::size_t n, double lo, double hi) {
    NoiseGrid g;
    g.sigmas.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
      g.sigmas[i] = lo + (hi - lo) * t;
    }
    return g;
  }
};

struct BondParams {
  double beta1 = 1.573;
  double sigma_b = 0.630;
  int n_pairs = 60;
  double x_min = 13.0;
  double x_max = 17.0;

  std::vector<double> x_design(int n = -1) const {
    const int count = n > 0 ? n : n_pairs;
    std::vector<double> x(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const double t = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.5;
      x[static_cast<std::size_t>(i)] = x_min + (x_max - x_min) * t;
    }
    return x;
  }
};

struct ExperimentConfig {
  ParameterVector theta_true = typical_parameters();
  ParameterBox box = default_parameter_box();
  FrequencyGrid grid = default_frequency_grid();
  MaterialSpec mat;
  NoiseGrid noise = NoiseGrid::linear(20, 1.0, 10.0);
  int replications = 500;
  double alpha = 0.05;
  double eta = 0.01;
  BondParams bond;
  std::vector<IntervalMethod> methods = {IntervalMethod::ssb, IntervalMethod::ls};
  std::uint64_t seed = 1;
  int starts = 8;
  int threads = 1;
  double log_base = 10.0;

  void validate() const {
    if (!theta_true.finite()) throw ConfigError("theta_true must be finite");
    box.validate();
    if (!box.contains(theta_true)) throw ConfigError("theta_true must lie inside the parameter box");
    grid.validate();
    mat.validate();
    noise.validate();
    if (replications < 1) throw ConfigError("replications must be >= 1");
    if (!(eta < alpha)) throw ConfigError("band miscoverage eta must be smaller than alpha");
    if (!(alpha > 0.0 && alpha < 1.0 && eta > 0.0)) throw ConfigError("alpha and eta must lie in (0, 1)");
    if (methods.empty()) throw ConfigError("at least one interval method required");
    if (bond.n_pairs < 3) throw ConfigError("bond model needs at least 3 pairs");
    if (!(bond.x_min < bond.x_max)) throw ConfigError("bond x-design range must be nondegenerate");
    if (starts < 1) throw ConfigError("starts must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
  }
};

/// Noisy phase observations per the additive Gaussian data model.
inline Eigen::VectorXd sample_phases(const ParameterVector& theta_true, const FrequencyGrid& grid,
                                     const MaterialSpec& mat, double sigma, GaussianStream& stream,
                                     double log_base = 10.0) {
  const std::vector<double> f = phase_response(theta_true, grid, mat, log_base);
  Eigen::VectorXd y(static_cast<Eigen::Index>(f.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y(i) = f[static_cast<std::size_t>(i)] + sigma * stream.next();
  }
  return y;
}

inline Eigen::VectorXd sample_phases(const ParameterVector& theta_true, const FrequencyGrid& grid,
                                     const MaterialSpec& mat, double sigma, std::uint64_t seed,
                                     double log_base = 10.0) {
  GaussianStream stream(seed);
  return sample_phases(theta_true, grid, mat, sigma, stream, log_base);
}

/// Bond pairs from the no-intercept generating model z = beta1 x + noise.
inline BondPairs sample_bond_pairs(double beta1, double sigma_b, const std::vector<double>& x_design,
                                   GaussianStream& stream) {
  BondPairs pairs;
  pairs.x = x_design;
  pairs.z.resize(x_design.size());
  for (std::size_t i = 0; i < x_design.size(); ++i) {
    pairs.z[i] = beta1 * x_design[i] + sigma_b * stream.next();
  }
  return pairs;
}

inline BondPairs sample_bond_pairs(double beta1, double sigma_b, int n_pairs,
                                   const std::vector<double>& x_design, std::uint64_t seed) {
  if (static_cast<int>(x_design.size()) != n_pairs) {
    throw ConfigError("sample_bond_pairs: x_design length must equal n_pairs");
  }
  GaussianStream stream(seed);
  return sample_bond_pairs(beta1, sigma_b, x_design, stream);
}

/// Shrink every unprotected coordinate's interval to 2^-shrink_exponent of its
/// original length, centered on the truth when that fits inside the previous
/// interval and clamped flush against the violated endpoint otherwise.
inline ParameterBox contract_box(const ParameterBox& box, const ParameterVector& theta_true,
                                 int shrink_exponent, const std::set<int>& protected_coords = {0}) {
  if (!box.contains(theta_true)) throw ConfigError("contract_box: truth must lie inside the box");
  ParameterBox out = box;
  const auto t = theta_true.to_array();
  for (int step = 0; step < shrink_exponent; ++step) {
    for (int i = 0; i < kNumParams; ++i) {
      if (protected_coords.count(i)) continue;
      const auto iu = static_cast<std::size_t>(i);
      const double len = 0.5 * (out.upper[iu] - out.lower[iu]);
      double lo = t[iu] - 0.5 * len;
      double hi = t[iu] + 0.5 * len;
      if (hi > out.upper[iu]) {
        hi = out.upper[iu];
        lo = hi - len;
      } else if (lo < out.lower[iu]) {
        lo = out.lower[iu];
        hi = lo + len;
      }
      out.lower[iu] = lo;
      out.upper[iu] = hi;
    }
  }
  return out;
}

/// One Monte Carlo cell row of an experiment report.
struct CellRow {
  IntervalMethod method = IntervalMethod::none;
  double key = 0.0;  // sigma, exponent, or sweep-cell id
  long long replications = 0;
  long long cover_stiff = 0;
  long long cover_bond = 0;
  double mean_len_stiff = 0.0;
  double mean_len_bond = 0.0;
  ConfidenceInterval cp_stiff;  // 95% Clopper-Pearson band on stiffness coverage
  ConfidenceInterval cp_bond;
  long long failures = 0;

  double coverage_stiff() const {
    return static_cast<double>(cover_stiff) / static_cast<double>(replications);
  }
  double coverage_bond() const {
    return static_cast<double>(cover_bond) / static_cast<double>(replications);
  }
};

struct ExperimentReport {
  std::string key_name = "sigma";
  std::vector<CellRow> rows;

  const CellRow* find(IntervalMethod m, double key) const {
    for (const auto& r : rows) {
      if (r.method == m && r.key == key) return &r;
    }
    return nullptr;
  }
};

namespace detail {

template <class Fn>
void parallel_for(int count, int threads, const Fn& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  const int workers = std::min(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct MethodOutcome {
  bool produced = false;
  bool flagged = false;
  bool cover_stiff = false;
  bool cover_bond = false;
  double len_stiff = 0.0;
  double len_bond = 0.0;
};

struct ReplicationOutcome {
  MethodOutcome ssb;
  MethodOutcome ls;

  MethodOutcome& of(IntervalMethod m) { return m == IntervalMethod::ssb ? ssb : ls; }
  const MethodOutcome& of(IntervalMethod m) const { return m == IntervalMethod::ssb ? ssb : ls; }
};

// Distinct stream labels per replication so draw counts never interact.
inline constexpr std::uint64_t kPhaseLabel = 1;
inline constexpr std::uint64_t kPairsLabel = 2;
inline constexpr std::uint64_t kFitLabel = 3;

// Namespacing for cell indices across experiment kinds, so composed
// experiments under one seed never share streams.
inline constexpr std::uint64_t kCoverageCellBase = 0;
inline constexpr std::uint64_t kContractionCellBase = 1000;
inline constexpr std::uint64_t kSweepBankCell = 2000;
inline constexpr std::uint64_t kSweepCellBase = 3000;

inline ReplicationOutcome run_replication(const ExperimentConfig& config, const ParameterBox& box,
                                          double sigma, std::uint64_t cell, int rep) {
  ReplicationOutcome out;
  const QoiSelector h = QoiSelector::log_stiffness();
  const double stiff_truth = config.theta_true.log_k0;
  const double bond_truth = config.bond.beta1 * stiff_truth;

  const GaussianStream base = GaussianStream::for_replication(config.seed, cell, static_cast<std::uint64_t>(rep));
  GaussianStream phase_stream = base.split(kPhaseLabel);
  GaussianStream pairs_stream = base.split(kPairsLabel);
  GaussianStream fit_seed_stream = base.split(kFitLabel);
  const std::uint64_t fit_seed = fit_seed_stream.next_u64();

  const double gamma = allocate_budget(config.alpha, config.eta).gamma;

  Eigen::VectorXd y;
  BondPairs pairs;
  LinearizedModel lin;
  BandModel band;
  try {
    y = sample_phases(config.theta_true, config.grid, config.mat, sigma, phase_stream, config.log_base);
    pairs = sample_bond_pairs(config.bond.beta1, config.bond.sigma_b, config.bond.x_design(), pairs_stream);
    const NlsFit fit =
        fit_nls(y, config.grid, box, config.mat, config.starts, fit_seed, config.log_base);
    lin = linearize(fit.theta_hat, y, config.grid, config.mat, jacobian_scales(box), config.log_base);
    band = fit_band(pairs, config.eta);
  } catch (const Error&) {
    return out;  // all requested methods count as failed replications
  }

  const auto evaluate = [&](IntervalMethod method) {
    MethodOutcome& mo = out.of(method);
    try {
      ConfidenceInterval stiff;
      if (method == IntervalMethod::ssb) {
        const double s_min = box_constrained_lin_min(lin, box);
        const double q = calibrate_q(s_min, static_cast<int>(config.grid.size()), kNumParams, gamma);
        stiff = ssb_endpoints(lin, box, q, h, 1.0 - gamma);
      } else {
        const LinearFit lfit = fit_linear(lin);
        stiff = ls_interval(lin, lfit, box, gamma, h);
      }
      const ConfidenceInterval bond = propagate(band, stiff);
      mo.produced = true;
      mo.flagged = stiff.degenerate;
      mo.cover_stiff = stiff.degenerate ? stiff.lower == stiff_truth : stiff.contains(stiff_truth);
      mo.cover_bond = bond.contains(bond_truth);
      mo.len_stiff = stiff.length();
      mo.len_bond = bond.length();
    } catch (const Error&) {
      mo = MethodOutcome{};
    }
  };
  for (IntervalMethod m : config.methods) evaluate(m);
  return out;
}

inline std::vector<CellRow> aggregate_cell(const ExperimentConfig& config,
                                           const std::vector<ReplicationOutcome>& outcomes, double key) {
  std::vector<CellRow> rows;
  for (IntervalMethod m : config.methods) {
    CellRow row;
    row.method = m;
    row.key = key;
    row.replications = static_cast<long long>(outcomes.size());
    long long produced = 0;
    for (const auto& rep : outcomes) {
      const MethodOutcome& mo = rep.of(m);
      if (!mo.produced) {
        ++row.failures;
        continue;
      }
      if (mo.flagged) ++row.failures;
      ++produced;
      row.cover_stiff += mo.cover_stiff ? 1 : 0;
      row.cover_bond += mo.cover_bond ? 1 : 0;
      row.mean_len_stiff += mo.len_stiff;
      row.mean_len_bond += mo.len_bond;
    }
    if (produced > 0) {
      row.mean_len_stiff /= static_cast<double>(produced);
      row.mean_len_bond /= static_cast<double>(produced);
    }
    row.cp_stiff = clopper_pearson({row.cover_stiff, row.replications}, 0.95);
    row.cp_bond = clopper_pearson({row.cover_bond, row.replications}, 0.95);
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<CellRow> run_cell(const ExperimentConfig& config, const ParameterBox& box, double sigma,
                                     std::uint64_t cell, double key) {
  std::vector<ReplicationOutcome> outcomes(static_cast<std::size_t>(config.replications));
  parallel_for(config.replications, config.threads, [&](int rep) {
    outcomes[static_cast<std::size_t>(rep)] = run_replication(config, box, sigma, cell, rep);
  });
  return aggregate_cell(config, outcomes, key);
}

}  // namespace detail

/// Coverage and expected-length study over the configured noise grid.
inline ExperimentReport run_coverage_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.key_name = "sigma";
  for (std::size_t s = 0; s < config.noise.sigmas.size(); ++s) {
    const double sigma = config.noise.sigmas[s];
    const auto rows = detail::run_cell(config, config.box, sigma,
                                       detail::kCoverageCellBase + static_cast<std::uint64_t>(s), sigma);
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

/// Contraction study at the middle noise level for an explicit exponent list.
inline ExperimentReport run_contraction_experiment(const ExperimentConfig& config,
                                                   const std::vector<int>& exponents) {
  config.validate();
  const double sigma = config.noise.sigmas[config.noise.middle_index()];
  ExperimentReport report;
  report.key_name = "exponent";
  for (int e : exponents) {
    if (e < 0) throw ConfigError("contraction exponent must be nonnegative");
    const ParameterBox contracted = contract_box(config.box, config.theta_true, e);
    const auto rows = detail::run_cell(config, contracted, sigma,
                                       detail::kContractionCellBase + static_cast<std::uint64_t>(e),
                                       static_cast<double>(e));
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

inline ExperimentReport run_contraction_experiment(const ExperimentConfig& config, int max_exponent) {
  std::vector<int> exponents;
  for (int e = 0; e < max_exponent; ++e) exponents.push_back(e);
  return run_contraction_experiment(config, exponents);
}

struct BondSweepRow {
  double beta1 = 0.0;
  double sigma_b = 0.0;
  int n_pairs = 0;
  double mean_len_bond = 0.0;
  long long replications = 0;
  long long failures = 0;
};

struct BondSweepReport {
  std::vector<BondSweepRow> rows;
};

/// Expected propagated-interval length as a function of the bond-model
/// parameters. One bank of stiffness intervals (middle noise level, ssb) is
/// shared across every sweep cell.
inline BondSweepReport run_bond_sweep(const ExperimentConfig& config, const std::vector<double>& beta1_grid,
                                      const std::vector<double>& sigma_b_grid,
                                      const std::vector<int>& n_grid) {
  config.validate();
  if (beta1_grid.empty() || sigma_b_grid.empty() || n_grid.empty()) {
    throw ConfigError("bond sweep grids must be nonempty");
  }
  const double sigma = config.noise.sigmas[config.noise.middle_index()];
  const double gamma = allocate_budget(config.alpha, config.eta).gamma;
  const QoiSelector h = QoiSelector::log_stiffness();

  // Bank of stiffness intervals, reused across all sweep cells.
  std::vector<ConfidenceInterval> bank(static_cast<std::size_t>(config.replications));
  std::vector<char> bank_ok(static_cast<std::size_t>(config.replications), 0);
  detail::parallel_for(config.replications, config.threads, [&](int rep) {
    const GaussianStream base = GaussianStream::for_replication(config.seed, detail::kSweepBankCell,
                                                                static_cast<std::uint64_t>(rep));
    GaussianStream phase_stream = base.split(detail::kPhaseLabel);
    GaussianStream fit_seed_stream = base.split(detail::kFitLabel);
    try {
      const Eigen::VectorXd y =
          sample_phases(config.theta_true, config.grid, config.mat, sigma, phase_stream, config.log_base);
      const NlsFit fit = fit_nls(y, config.grid, config.box, config.mat, config.starts,
                                 fit_seed_stream.next_u64(), config.log_base);
      const LinearizedModel lin =
          linearize(fit.theta_hat, y, config.grid, config.mat, jacobian_scales(config.box), config.log_base);
      const double s_min = box_constrained_lin_min(lin, config.box);
      const double q = calibrate_q(s_min, static_cast<int>(config.grid.size()), kNumParams, gamma);
      bank[static_cast<std::size_t>(rep)] = ssb_endpoints(lin, config.box, q, h, 1.0 - gamma);
      bank_ok[static_cast<std::size_t>(rep)] = 1;
    } catch (const Error&) {
      bank_ok[static_cast<std::size_t>(rep)] = 0;
    }
  });

  BondSweepReport report;
  std::uint64_t cell = detail::kSweepCellBase;
  const auto run_sweep_cell = [&](double beta1, double sigma_b, int n_pairs) {
    BondSweepRow row;
    row.beta1 = beta1;
    row.sigma_b = sigma_b;
    row.n_pairs = n_pairs;
    row.replications = config.replications;
    BondParams cell_bond = config.bond;
    cell_bond.n_pairs = n_pairs;
    const std::vector<double> x_design = cell_bond.x_design();
    std::vector<double> lengths(static_cast<std::size_t>(config.replications), -1.0);
    detail::parallel_for(config.replications, config.threads, [&](int rep) {
      if (!bank_ok[static_cast<std::size_t>(rep)]) return;
      const GaussianStream base =
          GaussianStream::for_replication(config.seed, cell, static_cast<std::uint64_t>(rep));
      GaussianStream pairs_stream = base.split(detail::kPairsLabel);
      try {
        const BondPairs pairs = sample_bond_pairs(beta1, sigma_b, x_design, pairs_stream);
        const BandModel band = fit_band(pairs, config.eta);
        const ConfidenceInterval bond = propagate(band, bank[static_cast<std::size_t>(rep)]);
        lengths[static_cast<std::size_t>(rep)] = bond.length();
      } catch (const Error&) {
      }
    });
    long long produced = 0;
    for (double len : lengths) {
      if (len < 0.0) {
        ++row.failures;
        continue;
      }
      ++produced;
      row.mean_len_bond += len;
    }
    if (produced > 0) row.mean_len_bond /= static_cast<double>(produced);
    report.rows.push_back(row);
    ++cell;
  };

  for (double beta1 : beta1_grid) {
    for (double sigma_b : sigma_b_grid) {
      run_sweep_cell(beta1, sigma_b, config.bond.n_pairs);
    }
  }
  for (int n_pairs : n_grid) {
    run_sweep_cell(config.bond.beta1, config.bond.sigma_b, n_pairs);
  }
  return report;
}

}  // namespace bondgauge
