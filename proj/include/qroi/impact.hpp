#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qroi/types.hpp"

namespace qroi {

/// Inputs of the static system impact index.
struct ImpactInputs {
  double delta_qaly = 0.0;        ///< QALY improvement per period
  double marginal_roi_cost = 1.0; ///< cost units per ROI unit, > 0
  BehavioralParams params;
  double decay_rate = 1.0;        ///< rho

  void validate() const;
};

/// Time-indexed impact index values; indices strictly increasing.
struct SiiSeries {
  std::vector<std::pair<int, double>> values;
  /// Periods dropped because the ROI difference was zero.
  std::vector<int> skipped_periods;

  void validate() const;
};

/// Static index (delta_qaly / marginal_roi_cost) * (1 - gamma*).
double sii_static(const ImpactInputs& inputs);

/// Dynamic index lambda* (dq/droi) (1 - gamma*) exp(-rho (1 - T*)).
/// Throws DegeneratePeriodError when delta_roi is zero; callers skip the
/// period and flag it.
double sii_dynamic(double delta_qaly, double delta_roi, const BehavioralParams& params,
                   double decay_rate);

/// Macro proxy LifeExpectancy * ln(1 + HealthSpending) / 100.
double sii_empirical(double life_expectancy, double health_spending);

/// GDP conversion alpha_health * delta_sii, alpha_health in (0, 1).
double macro_conversion(double delta_sii, double alpha_health);

/// Relative index change (1 - gamma - dgamma) / (1 - gamma) - 1 implied by
/// the fairness discount, all else fixed.
double fairness_counterfactual(double gamma_hat, double delta_gamma);

/// Per-period dynamic index over consecutive observation differences.
/// Zero-ROI-difference periods are skipped and flagged.
SiiSeries dynamic_sii_series(const ObservationSeries& data, const BehavioralParams& params,
                             double decay_rate);

/// Closure of the dynamic index formula at a fixed qaly/roi ratio: the
/// objective behind formula-level sensitivity reports. Evaluates the formula
/// as-is, without clamping the triple to the box.
std::function<double(const BehavioralParams&)> dynamic_sii_objective(
    double qaly_roi_ratio, double decay_rate);

}  // namespace qroi
