#pragma once

#include "qroi/types.hpp"

namespace qroi {

/// Saturating QALY response q_max * (1 - exp(-k * action)).
/// Monotone increasing, concave, bounded by q_max.
double qaly_response(double action, const ForwardModelConfig& cfg);

/// Linear expenditure unit_cost * action.
double action_cost(double action, const ForwardModelConfig& cfg);

/// Fairness-adjusted utility (1 - gamma) * QALY(a) - gamma * Cost(a).
double utility(double action, double gamma, const ForwardModelConfig& cfg);

/// Maximizer of the fairness-adjusted utility over [0, a_max]. Interior
/// solutions follow the marginal indifference rule
///   dQALY/da = gamma / (1 - gamma) * dCost/da,
/// i.e. a* = (1/k) ln((1 - gamma) q_max k / (gamma c)), clipped to the box.
double optimal_action(double gamma, const ForwardModelConfig& cfg);

/// Temporal weight w(t; T) = 1 - (1 - T) exp(-t / tau). Identically one for
/// T = 1; tends to one as t grows.
double temporal_weight(int period, double temporal, const ForwardModelConfig& cfg);

/// Behavioral response lambda * (1 - gamma) * QALY(a) * w(t; T).
double response_function(double action, int period, const BehavioralParams& params,
                         const ForwardModelConfig& cfg);

namespace detail {

// Unvalidated kernels used by optimizers and finite differences, where
// iterates may transiently leave the parameter box.
inline double temporal_weight_unchecked(double period, double temporal, double tau) {
  return 1.0 - (1.0 - temporal) * std::exp(-period / tau);
}

inline double response_unchecked(double qaly_value, double period, double lambda,
                                 double gamma, double temporal, double tau) {
  return lambda * (1.0 - gamma) * qaly_value *
         temporal_weight_unchecked(period, temporal, tau);
}

}  // namespace detail
}  // namespace qroi
