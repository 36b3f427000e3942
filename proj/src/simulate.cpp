#include "qroi/simulate.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "qroi/impact.hpp"
#include "qroi/parallel.hpp"
#include "qroi/rng.hpp"
#include "qroi/stats.hpp"

namespace qroi {

namespace {

constexpr std::uint64_t kTagSimNoise = 0x71;
constexpr double kConvergenceBand = 0.05;

void check_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1]");
  }
}

struct ReplicationOutcome {
  double terminal_sii = std::numeric_limits<double>::quiet_NaN();
  double convergence_time = 0.0;
  int degenerate_periods = 0;
};

// One replication across all regions; writes trajectory rows into the
// preassigned slots of `points`.
ReplicationOutcome run_replication(const ScenarioConfig& cfg,
                                   const ForwardModelConfig& fcfg, int rep,
                                   std::vector<TrajectoryPoint>& points) {
  ReplicationOutcome outcome;
  const double initial_gap = std::fabs(cfg.t0 - cfg.t_star);
  const BehavioralParams region_params{cfg.lambda, cfg.gamma, cfg.t0};

  double terminal_sum = 0.0;
  int terminal_count = 0;
  double convergence_sum = 0.0;

  for (int region = 0; region < cfg.n_regions; ++region) {
    double temporal = cfg.t0;
    double last_finite_sii = std::numeric_limits<double>::quiet_NaN();
    int convergence_time = cfg.horizon;
    bool converged = false;

    for (int t = 0; t < cfg.horizon; ++t) {
      const double delta_roi =
          cfg.roi_series.empty() ? cfg.roi_drift : cfg.roi_series[t];
      const double eps =
          cfg.noise_sigma * rng::normal({cfg.base_seed, kTagSimNoise,
                                         static_cast<std::uint64_t>(rep),
                                         static_cast<std::uint64_t>(region),
                                         static_cast<std::uint64_t>(t)});
      const double delta_qaly = cfg.lambda * (1.0 - cfg.gamma) * delta_roi + eps;

      double sii = std::numeric_limits<double>::quiet_NaN();
      if (delta_roi == 0.0) {
        ++outcome.degenerate_periods;
      } else {
        BehavioralParams state = region_params;
        state.temporal = temporal;
        sii = sii_dynamic(delta_qaly, delta_roi, state, fcfg.decay_rate);
        last_finite_sii = sii;
      }

      if (!converged &&
          (initial_gap == 0.0 ||
           std::fabs(temporal - cfg.t_star) < kConvergenceBand * initial_gap)) {
        convergence_time = t;
        converged = true;
      }

      const std::size_t slot =
          (static_cast<std::size_t>(rep) * cfg.n_regions + region) * cfg.horizon + t;
      points[slot] = TrajectoryPoint{rep, region, t, delta_qaly, temporal, sii};

      temporal = step_adaptation(temporal, cfg.learning_rate, cfg.t_star);
    }

    if (std::isfinite(last_finite_sii)) {
      terminal_sum += last_finite_sii;
      ++terminal_count;
    }
    convergence_sum += convergence_time;
  }

  if (terminal_count > 0) outcome.terminal_sii = terminal_sum / terminal_count;
  outcome.convergence_time = convergence_sum / cfg.n_regions;
  return outcome;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (label.empty()) throw ConfigError("scenario label must be non-empty");
  check_unit_interval(lambda, "lambda");
  check_unit_interval(gamma, "gamma");
  check_unit_interval(temporal_init, "temporal_init");
  check_unit_interval(t0, "t0");
  check_unit_interval(t_star, "t_star");
  check_unit_interval(learning_rate, "learning_rate");
  if (!(saturation_rate > 0.0)) throw ConfigError("saturation_rate must be > 0");
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
  if (n_rep < 1) throw ConfigError("n_rep must be >= 1");
  if (horizon < 2) throw ConfigError("horizon must be >= 2");
  if (n_regions < 1) throw ConfigError("n_regions must be >= 1");
  if (!roi_series.empty() &&
      roi_series.size() != static_cast<std::size_t>(horizon)) {
    throw ConfigError("roi_series length must equal horizon");
  }
  for (double v : roi_series) {
    if (!std::isfinite(v)) throw ConfigError("roi_series entries must be finite");
  }
  if (!std::isfinite(roi_drift)) throw ConfigError("roi_drift must be finite");
}

double step_adaptation(double t_current, double learning_rate, double t_star) {
  if (!(t_current >= 0.0 && t_current <= 1.0) || !(t_star >= 0.0 && t_star <= 1.0) ||
      !(learning_rate >= 0.0 && learning_rate <= 1.0)) {
    throw DomainError("step_adaptation inputs must lie in [0, 1]");
  }
  return t_current + learning_rate * (t_star - t_current);
}

SimulationResult simulate(const ScenarioConfig& cfg, const ForwardModelConfig& fcfg,
                          int threads) {
  cfg.validate();
  fcfg.validate();

  SimulationResult result;
  result.seed_used = cfg.base_seed;
  result.n_rep = cfg.n_rep;
  result.n_regions = cfg.n_regions;
  result.horizon = cfg.horizon;
  result.trajectories.resize(static_cast<std::size_t>(cfg.n_rep) * cfg.n_regions *
                             cfg.horizon);

  std::vector<ReplicationOutcome> outcomes(cfg.n_rep);
  parallel_for(cfg.n_rep, threads, [&](int rep) {
    outcomes[rep] = run_replication(cfg, fcfg, rep, result.trajectories);
  });

  Eigen::VectorXd terminal(cfg.n_rep), convergence(cfg.n_rep);
  for (int rep = 0; rep < cfg.n_rep; ++rep) {
    terminal[rep] = outcomes[rep].terminal_sii;
    convergence[rep] = outcomes[rep].convergence_time;
    result.degenerate_periods += outcomes[rep].degenerate_periods;
  }
  result.terminal_sii_mean = terminal.mean();
  result.convergence_time_mean = convergence.mean();
  if (cfg.n_rep >= 2) {
    result.terminal_sii_se = stats::standard_error(terminal);
    result.convergence_time_se = stats::standard_error(convergence);
  }
  return result;
}

std::vector<std::pair<std::string, SimulationResult>> run_scenario_suite(
    const std::vector<ScenarioConfig>& scenarios, const ForwardModelConfig& fcfg,
    int threads) {
  if (scenarios.empty()) throw ConfigError("scenario suite must be non-empty");
  std::set<std::string> labels;
  for (const ScenarioConfig& cfg : scenarios) {
    if (!labels.insert(cfg.label).second) {
      throw ConfigError("duplicate scenario label: " + cfg.label);
    }
  }
  std::vector<std::pair<std::string, SimulationResult>> out;
  out.reserve(scenarios.size());
  for (const ScenarioConfig& cfg : scenarios) {
    out.emplace_back(cfg.label, simulate(cfg, fcfg, threads));
  }
  return out;
}

PolicyComparison compare_policies(const ScenarioConfig& baseline,
                                  const ScenarioConfig& adaptive,
                                  const ForwardModelConfig& fcfg, int threads) {
  baseline.validate();
  adaptive.validate();
  if (baseline.n_rep != adaptive.n_rep) {
    throw ConfigError("policy comparison needs equal replication counts");
  }
  if (baseline.n_rep < 2) {
    throw StatisticsError("policy comparison needs n_rep >= 2");
  }

  const SimulationResult base_run = simulate(baseline, fcfg, threads);

  PolicyComparison comparison;
  const char* dims[] = {"lambda", "gamma", "temporal"};
  for (const char* dim : dims) {
    ScenarioConfig arm = baseline;
    arm.label = baseline.label + "_" + dim;
    arm.base_seed = adaptive.base_seed;
    if (dim == std::string("lambda")) {
      arm.lambda = adaptive.lambda;
    } else if (dim == std::string("gamma")) {
      arm.gamma = adaptive.gamma;
    } else {
      arm.temporal_init = adaptive.temporal_init;
      arm.t0 = adaptive.t0;
      arm.learning_rate = adaptive.learning_rate;
      arm.t_star = adaptive.t_star;
    }
    const SimulationResult adaptive_run = simulate(arm, fcfg, threads);

    const stats::WelchTest test = stats::welch_t_test(
        base_run.terminal_sii_mean, base_run.terminal_sii_se, baseline.n_rep,
        adaptive_run.terminal_sii_mean, adaptive_run.terminal_sii_se, adaptive.n_rep);

    PolicyDimensionStats entry;
    entry.dimension = dim;
    entry.baseline_mean = base_run.terminal_sii_mean;
    entry.adaptive_mean = adaptive_run.terminal_sii_mean;
    entry.baseline_se = base_run.terminal_sii_se;
    entry.adaptive_se = adaptive_run.terminal_sii_se;
    entry.t_statistic = test.t;
    entry.p_value_label = stats::significance_label(test.p_two_sided);
    comparison.dimensions.push_back(std::move(entry));
  }
  return comparison;
}

std::vector<ScenarioConfig> preset_scenarios() {
  ScenarioConfig base;
  base.label = "base";
  base.base_seed = 101;

  ScenarioConfig fairness_high = base;
  fairness_high.label = "fairness_high";
  fairness_high.gamma = 0.6;
  fairness_high.base_seed = 102;

  ScenarioConfig adaptive_fast = base;
  adaptive_fast.label = "adaptive_fast";
  adaptive_fast.learning_rate = 0.3;
  adaptive_fast.base_seed = 103;

  ScenarioConfig efficiency_boost = base;
  efficiency_boost.label = "efficiency_boost";
  efficiency_boost.lambda = 0.8;
  efficiency_boost.gamma = 0.3;
  efficiency_boost.base_seed = 104;

  return {base, fairness_high, adaptive_fast, efficiency_boost};
}

ScenarioConfig preset_scenario(const std::string& label) {
  for (ScenarioConfig& cfg : preset_scenarios()) {
    if (cfg.label == label) return cfg;
  }
  throw ConfigError("unknown scenario preset: " + label);
}

}  // namespace qroi
