#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qroi/types.hpp"

namespace qroi {

/// One policy experiment: region parameters, adaptation pathway, noise and
/// replication settings. The ROI driver is exogenous: constant `roi_drift`
/// per period, or a user series of length `horizon`.
struct ScenarioConfig {
  std::string label = "base";
  double lambda = 0.6;
  double gamma = 0.4;
  double temporal_init = 0.6;  ///< nominal responsiveness of the configuration
  double saturation_rate = 5.0;
  double t0 = 0.5;             ///< initial responsiveness of the adaptation state
  double noise_sigma = 0.02;
  int n_rep = 20;
  double learning_rate = 0.1;  ///< eta
  double t_star = 0.7;         ///< steady-state responsiveness
  int horizon = 50;
  int n_regions = 1;
  std::uint64_t base_seed = 0;
  double roi_drift = 1.0;
  std::vector<double> roi_series;  ///< optional override, length == horizon

  void validate() const;
};

struct TrajectoryPoint {
  int replication = 0;
  int region = 0;
  int period = 0;
  double delta_qaly = 0.0;
  double temporal = 0.0;
  double sii = 0.0;
};

struct SimulationResult {
  /// Ordered by (replication, region, period); length n_rep*n_regions*horizon.
  std::vector<TrajectoryPoint> trajectories;
  double terminal_sii_mean = 0.0;
  double terminal_sii_se = 0.0;
  /// First period inside the 5% band of |T - t_star| relative to the initial
  /// gap, averaged across regions; horizon when the band is never reached.
  double convergence_time_mean = 0.0;
  double convergence_time_se = 0.0;
  int degenerate_periods = 0;  ///< skipped zero-ROI-difference periods
  std::uint64_t seed_used = 0;
  int n_rep = 0;
  int n_regions = 0;
  int horizon = 0;
};

/// Per-dimension comparison of two policy regimes.
struct PolicyDimensionStats {
  std::string dimension;  ///< "lambda", "gamma" or "temporal"
  double baseline_mean = 0.0;
  double adaptive_mean = 0.0;
  double baseline_se = 0.0;
  double adaptive_se = 0.0;
  double t_statistic = 0.0;  ///< +/-inf flags a deterministic nonzero difference
  std::string p_value_label = "ns";
};

struct PolicyComparison {
  std::vector<PolicyDimensionStats> dimensions;
};

/// One adaptation update t + eta (t_star - t).
double step_adaptation(double t_current, double learning_rate, double t_star);

/// Monte Carlo run of the propagation dynamics: per replication and region,
/// delta_qaly = lambda (1-gamma) delta_roi + eps with eps ~ N(0, sigma^2)
/// from the counter stream (base_seed, replication, region, period); the
/// responsiveness state follows the adaptation update; the per-period index
/// comes from the dynamic impact formula at the current state.
SimulationResult simulate(const ScenarioConfig& cfg, const ForwardModelConfig& fcfg,
                          int threads = 1);

/// Runs each scenario with its own seed; labels must be distinct.
std::vector<std::pair<std::string, SimulationResult>> run_scenario_suite(
    const std::vector<ScenarioConfig>& scenarios, const ForwardModelConfig& fcfg,
    int threads = 1);

/// Per behavioral dimension, reruns the baseline with only that dimension's
/// pathway swapped to the adaptive values, and compares terminal indices with
/// an unequal-variance t test (stars per 0.05 / 0.01 / 0.001).
PolicyComparison compare_policies(const ScenarioConfig& baseline,
                                  const ScenarioConfig& adaptive,
                                  const ForwardModelConfig& fcfg, int threads = 1);

/// Built-in configurations: base, fairness_high, adaptive_fast,
/// efficiency_boost.
std::vector<ScenarioConfig> preset_scenarios();

/// Preset by label; throws ConfigError for unknown labels.
ScenarioConfig preset_scenario(const std::string& label);

}  // namespace qroi
