#include "qroi/impact.hpp"

#include <cmath>

namespace qroi {

void ImpactInputs::validate() const {
  if (!std::isfinite(delta_qaly)) throw DomainError("delta_qaly must be finite");
  if (!(marginal_roi_cost > 0.0)) throw DomainError("marginal_roi_cost must be > 0");
  if (!(decay_rate >= 0.0)) throw DomainError("decay_rate must be >= 0");
  params.validate();
}

void SiiSeries::validate() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].second)) throw DataError("non-finite sii value");
    if (i > 0 && values[i].first <= values[i - 1].first) {
      throw DataError("sii series indices must be strictly increasing");
    }
  }
}

double sii_static(const ImpactInputs& inputs) {
  inputs.validate();
  return inputs.delta_qaly / inputs.marginal_roi_cost * (1.0 - inputs.params.gamma);
}

double sii_dynamic(double delta_qaly, double delta_roi, const BehavioralParams& params,
                   double decay_rate) {
  params.validate();
  if (!(decay_rate >= 0.0)) throw DomainError("decay_rate must be >= 0");
  if (delta_roi == 0.0) {
    throw DegeneratePeriodError("zero ROI change: dynamic index undefined for this period");
  }
  return params.lambda * (delta_qaly / delta_roi) * (1.0 - params.gamma) *
         std::exp(-decay_rate * (1.0 - params.temporal));
}

double sii_empirical(double life_expectancy, double health_spending) {
  if (!(life_expectancy > 0.0) || !std::isfinite(life_expectancy)) {
    throw DomainError("life_expectancy must be positive and finite");
  }
  if (!std::isfinite(health_spending)) throw DataError("health_spending must be finite");
  if (health_spending < 0.0) throw DataError("health_spending must be >= 0");
  return life_expectancy * std::log1p(health_spending) / 100.0;
}

double macro_conversion(double delta_sii, double alpha_health) {
  if (!(alpha_health > 0.0 && alpha_health < 1.0)) {
    throw DomainError("alpha_health must lie in (0, 1)");
  }
  if (!std::isfinite(delta_sii)) throw DomainError("delta_sii must be finite");
  return alpha_health * delta_sii;
}

double fairness_counterfactual(double gamma_hat, double delta_gamma) {
  if (gamma_hat == 1.0) throw DomainError("gamma_hat = 1 leaves no efficiency to discount");
  const double shifted = gamma_hat + delta_gamma;
  if (gamma_hat < 0.0 || gamma_hat > 1.0 || shifted < 0.0 || shifted > 1.0) {
    throw DomainError("gamma_hat and gamma_hat + delta_gamma must lie in [0, 1]");
  }
  return (1.0 - shifted) / (1.0 - gamma_hat) - 1.0;
}

SiiSeries dynamic_sii_series(const ObservationSeries& data, const BehavioralParams& params,
                             double decay_rate) {
  SiiSeries out;
  for (Eigen::Index i = 1; i < data.size(); ++i) {
    const double dq = data.qalys()[i] - data.qalys()[i - 1];
    const double droi = data.rois()[i] - data.rois()[i - 1];
    const int period = data.periods()[i];
    if (droi == 0.0) {
      out.skipped_periods.push_back(period);
      continue;
    }
    out.values.emplace_back(period, sii_dynamic(dq, droi, params, decay_rate));
  }
  return out;
}

std::function<double(const BehavioralParams&)> dynamic_sii_objective(
    double qaly_roi_ratio, double decay_rate) {
  if (!(decay_rate >= 0.0)) throw DomainError("decay_rate must be >= 0");
  return [qaly_roi_ratio, decay_rate](const BehavioralParams& p) {
    return p.lambda * qaly_roi_ratio * (1.0 - p.gamma) *
           std::exp(-decay_rate * (1.0 - p.temporal));
  };
}

}  // namespace qroi
