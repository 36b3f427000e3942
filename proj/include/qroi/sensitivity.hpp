#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "qroi/inverse.hpp"
#include "qroi/types.hpp"

namespace qroi {

/// Objective mapping a behavioral triple to an impact value. Formula-backed
/// objectives evaluate outside [0,1]; objectives that validate their inputs
/// reject perturbed points by throwing.
using SiiObjective = std::function<double(const BehavioralParams&)>;

enum class WhichParam { Lambda, Gamma, Temporal };

struct SensitivityValue {
  double raw_coefficient = 0.0;
  /// raw * theta / SII(baseline); absent when the baseline value is zero.
  std::optional<double> elasticity;
  double perturbation_fraction = 0.0;
};

struct SensitivityReport {
  SensitivityValue lambda;
  SensitivityValue gamma;
  SensitivityValue temporal;
  double baseline_value = 0.0;
  std::string objective_label;  ///< e.g. "dynamic-formula", "simulation", "empirical"
};

/// Central difference of the objective in one parameter with step
/// fraction * theta (absolute step `fraction` when theta is zero, where a
/// relative step degenerates). Objective failures at perturbed points are
/// reported as domain errors advising a smaller fraction.
SensitivityValue sensitivity_coefficient(const SiiObjective& objective,
                                         const BehavioralParams& baseline,
                                         WhichParam which, double fraction);

/// Coefficients for all three parameters at the baseline.
SensitivityReport full_report(const SiiObjective& objective,
                              const BehavioralParams& baseline, double fraction,
                              const std::string& objective_label);

/// Objective values on a (lambda, gamma) grid at fixed T, reported as
/// differences from the first cell.
struct FieldGrid {
  Eigen::VectorXd lambda_axis;
  Eigen::VectorXd gamma_axis;
  Eigen::MatrixXd values;  ///< rows follow lambda_axis, columns gamma_axis
};

FieldGrid sensitivity_field(const SiiObjective& objective,
                            const Eigen::VectorXd& lambda_axis,
                            const Eigen::VectorXd& gamma_axis, double fixed_t);

/// Monte Carlo estimator-stability study: each draw perturbs the fitted
/// point by uniform +/-fraction (the sole refit start) and refits on a qaly
/// column jittered multiplicatively by uniform +/-fraction, so fraction = 0
/// reproduces the baseline exactly. Fails when more than 10% of draws fail.
struct RobustnessSummary {
  struct ParamStats {
    double mean = 0.0;
    double std = 0.0;
    double min = 0.0;
    double max = 0.0;
  };
  ParamStats lambda;
  ParamStats gamma;
  ParamStats temporal;
  BehavioralParams baseline;
  int n_draws = 0;
  int failed_draws = 0;
  double fraction = 0.0;
};

RobustnessSummary robustness_study(const ObservationSeries& data,
                                   const InverseConfig& icfg,
                                   const ForwardModelConfig& fcfg, double fraction,
                                   int n_draws, std::uint64_t seed, int threads = 1);

}  // namespace qroi
