#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bondgauge/errors.hpp"
#include "bondgauge/simulate.hpp"
#include "bondgauge/types.hpp"

namespace bondgauge {

/// Fully validated run configuration backing every CLI command.
struct RunConfig {
  ExperimentConfig experiment;
  std::string profile = "typical";
};

namespace detail {

using nlohmann::json;

inline double get_num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline ParameterVector parse_theta(const json& j) {
  ParameterVector theta;
  theta.log_k0 = get_num(j, "log_k0", theta.log_k0);
  theta.alpha0 = get_num(j, "alpha0", theta.alpha0);
  theta.a = get_num(j, "a", theta.a);
  theta.b = get_num(j, "b", theta.b);
  theta.l_bl = get_num(j, "l_bl", theta.l_bl);
  return theta;
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& root, const std::string& profile_override = "") {
  using detail::get_num;
  RunConfig cfg;
  ExperimentConfig& exp = cfg.experiment;

  const auto model = root.value("model", nlohmann::json::object());
  cfg.profile = model.value("profile", std::string("typical"));
  if (!profile_override.empty()) cfg.profile = profile_override;
  if (cfg.profile == "typical") {
    exp.theta_true = typical_parameters();
  } else if (cfg.profile == "boundary") {
    exp.theta_true = boundary_parameters();
  } else if (cfg.profile == "custom") {
    if (!model.contains("theta")) throw ConfigError("config: custom profile requires model.theta");
    exp.theta_true = detail::parse_theta(model.at("theta"));
  } else {
    throw ConfigError("config: unknown profile '" + cfg.profile + "' (typical|boundary|custom)");
  }
  exp.log_base = get_num(model, "log_base", 10.0);
  if (!(exp.log_base > 1.0)) throw ConfigError("config: model.log_base must exceed 1");
  {
    const auto grid = model.value("grid", nlohmann::json::object());
    const double n = get_num(grid, "n", 100.0);
    const double f_min = get_num(grid, "f_min_hz", 2.0e6);
    const double f_max = get_num(grid, "f_max_hz", 8.0e6);
    if (n < 6 || n != std::floor(n)) throw ConfigError("config: grid.n must be an integer >= 6");
    if (!(f_min > 0.0 && f_max > f_min)) throw ConfigError("config: grid frequencies must be increasing and positive");
    exp.grid = FrequencyGrid::linear_hz(static_cast<std::size_t>(n), f_min, f_max);
  }

  if (root.contains("materials")) {
    const auto& m = root.at("materials");
    exp.mat.e1 = get_num(m, "e1", exp.mat.e1);
    exp.mat.c_l1 = get_num(m, "c_l1", exp.mat.c_l1);
    exp.mat.alpha1 = get_num(m, "alpha1", exp.mat.alpha1);
    exp.mat.e_adh = get_num(m, "e_adh", exp.mat.e_adh);
    exp.mat.c_l_adh = get_num(m, "c_l_adh", exp.mat.c_l_adh);
  }

  if (root.contains("box")) {
    const auto& b = root.at("box");
    if (!b.contains("lower") || !b.contains("upper")) throw ConfigError("config: box needs lower and upper");
    const auto lo = b.at("lower");
    const auto hi = b.at("upper");
    if (!lo.is_array() || !hi.is_array() || lo.size() != static_cast<std::size_t>(kNumParams) ||
        hi.size() != static_cast<std::size_t>(kNumParams)) {
      throw ConfigError("config: box.lower/upper must be arrays of length 5");
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(kNumParams); ++i) {
      exp.box.lower[i] = lo.at(i).get<double>();
      exp.box.upper[i] = hi.at(i).get<double>();
    }
  }

  if (root.contains("noise")) {
    const auto& n = root.at("noise");
    if (n.contains("sigmas")) {
      exp.noise.sigmas = n.at("sigmas").get<std::vector<double>>();
    } else {
      const double count = get_num(n, "n", 20.0);
      if (count < 1 || count != std::floor(count)) throw ConfigError("config: noise.n must be a positive integer");
      exp.noise = NoiseGrid::linear(static_cast<std::size_t>(count), get_num(n, "min", 1.0),
                                    get_num(n, "max", 10.0));
    }
  }

  if (root.contains("bond")) {
    const auto& b = root.at("bond");
    exp.bond.beta1 = get_num(b, "beta1", exp.bond.beta1);
    exp.bond.sigma_b = get_num(b, "sigma_b", exp.bond.sigma_b);
    const double n_pairs = get_num(b, "n_pairs", exp.bond.n_pairs);
    if (n_pairs < 3 || n_pairs != std::floor(n_pairs)) throw ConfigError("config: bond.n_pairs must be an integer >= 3");
    exp.bond.n_pairs = static_cast<int>(n_pairs);
    exp.bond.x_min = get_num(b, "x_min", exp.bond.x_min);
    exp.bond.x_max = get_num(b, "x_max", exp.bond.x_max);
  }

  if (root.contains("experiment")) {
    const auto& e = root.at("experiment");
    const double reps = get_num(e, "replications", exp.replications);
    if (reps < 1 || reps != std::floor(reps)) throw ConfigError("config: experiment.replications must be a positive integer");
    exp.replications = static_cast<int>(reps);
    exp.alpha = get_num(e, "alpha", exp.alpha);
    exp.eta = get_num(e, "eta", exp.eta);
    const double seed = get_num(e, "seed", 1.0);
    if (seed < 0 || seed != std::floor(seed)) throw ConfigError("config: experiment.seed must be a nonnegative integer");
    exp.seed = static_cast<std::uint64_t>(seed);
    const double starts = get_num(e, "starts", exp.starts);
    if (starts < 1 || starts != std::floor(starts)) throw ConfigError("config: experiment.starts must be a positive integer");
    exp.starts = static_cast<int>(starts);
    if (e.contains("methods")) {
      exp.methods.clear();
      for (const auto& m : e.at("methods")) {
        const std::string name = m.get<std::string>();
        if (name == "ssb") {
          exp.methods.push_back(IntervalMethod::ssb);
        } else if (name == "ls") {
          exp.methods.push_back(IntervalMethod::ls);
        } else {
          throw ConfigError("config: unknown method '" + name + "' (ssb|ls)");
        }
      }
    }
  }

  exp.validate();
  return cfg;
}

inline RunConfig load_run_config(const std::string& path, const std::string& profile_override = "") {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json root;
  try {
    in >> root;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_run_config(root, profile_override);
}

}  // namespace bondgauge
