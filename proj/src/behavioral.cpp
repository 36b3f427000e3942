#include "qroi/behavioral.hpp"

#include <algorithm>
#include <sstream>

namespace qroi {

namespace {

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(name) + " must be finite");
  }
}

void check_action(double action, const ForwardModelConfig& cfg) {
  require_finite(action, "action");
  if (action < 0.0 || action > cfg.a_max) {
    std::ostringstream msg;
    msg << "action " << action << " outside [0, " << cfg.a_max << "]";
    throw DomainError(msg.str());
  }
}

void check_unit(double x, const char* name) {
  require_finite(x, name);
  if (x < 0.0 || x > 1.0) {
    std::ostringstream msg;
    msg << name << " = " << x << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

}  // namespace

void BehavioralParams::validate(double upper) const {
  require_finite(lambda, "lambda");
  require_finite(gamma, "gamma");
  require_finite(temporal, "temporal");
  if (lambda < 0.0 || lambda > upper) throw DomainError("lambda outside box");
  if (gamma < 0.0 || gamma > upper) throw DomainError("gamma outside box");
  if (temporal < 0.0 || temporal > upper) throw DomainError("temporal outside box");
}

void ForwardModelConfig::validate() const {
  if (!(saturation_rate > 0.0)) throw DomainError("saturation_rate must be > 0");
  if (!(q_max > 0.0)) throw DomainError("q_max must be > 0");
  if (!(unit_cost > 0.0)) throw DomainError("unit_cost must be > 0");
  if (!(a_max > 0.0)) throw DomainError("a_max must be > 0");
  if (!(decay_rate >= 0.0)) throw DomainError("decay_rate must be >= 0");
  if (!(response_timescale > 0.0)) throw DomainError("response_timescale must be > 0");
}

ObservationSeries::ObservationSeries(Eigen::VectorXi periods, Eigen::VectorXd actions,
                                     Eigen::VectorXd qalys, Eigen::VectorXd rois,
                                     double a_max)
    : periods_(std::move(periods)),
      actions_(std::move(actions)),
      qalys_(std::move(qalys)),
      rois_(std::move(rois)),
      a_max_(a_max) {
  const Eigen::Index n = periods_.size();
  if (n < 2) throw DataError("observation series needs at least 2 records");
  if (actions_.size() != n || qalys_.size() != n || rois_.size() != n) {
    throw DataError("observation columns have mismatched lengths");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (periods_[i] < 0) throw DataError("period indices must be >= 0");
    if (i > 0 && periods_[i] <= periods_[i - 1]) {
      throw DataError("period indices must be strictly increasing");
    }
    if (!std::isfinite(actions_[i]) || actions_[i] < 0.0 || actions_[i] > a_max_) {
      throw DataError("action outside [0, a_max] at record " + std::to_string(i));
    }
    if (!std::isfinite(qalys_[i]) || !std::isfinite(rois_[i])) {
      throw DataError("non-finite qaly/roi at record " + std::to_string(i));
    }
  }
}

ObservationSeries ObservationSeries::with_qalys(Eigen::VectorXd qalys) const {
  return ObservationSeries(periods_, actions_, std::move(qalys), rois_, a_max_);
}

double qaly_response(double action, const ForwardModelConfig& cfg) {
  check_action(action, cfg);
  return cfg.q_max * (1.0 - std::exp(-cfg.saturation_rate * action));
}

double action_cost(double action, const ForwardModelConfig& cfg) {
  check_action(action, cfg);
  return cfg.unit_cost * action;
}

double utility(double action, double gamma, const ForwardModelConfig& cfg) {
  check_unit(gamma, "gamma");
  return (1.0 - gamma) * qaly_response(action, cfg) - gamma * action_cost(action, cfg);
}

double optimal_action(double gamma, const ForwardModelConfig& cfg) {
  check_unit(gamma, "gamma");
  if (gamma == 0.0) return cfg.a_max;  // utility is monotone increasing
  const double k = cfg.saturation_rate;
  // First-order condition: (1-g) q_max k exp(-k a) = g c.
  const double ratio = (1.0 - gamma) * cfg.q_max * k / (gamma * cfg.unit_cost);
  if (ratio <= 1.0) return 0.0;  // cost weight kills all interior gain
  return std::min(std::log(ratio) / k, cfg.a_max);
}

double temporal_weight(int period, double temporal, const ForwardModelConfig& cfg) {
  check_unit(temporal, "temporal");
  if (period < 0) throw DomainError("period must be >= 0");
  return detail::temporal_weight_unchecked(static_cast<double>(period), temporal,
                                           cfg.response_timescale);
}

double response_function(double action, int period, const BehavioralParams& params,
                         const ForwardModelConfig& cfg) {
  params.validate();
  if (period < 0) throw DomainError("period must be >= 0");
  return detail::response_unchecked(qaly_response(action, cfg),
                                    static_cast<double>(period), params.lambda,
                                    params.gamma, params.temporal,
                                    cfg.response_timescale);
}

}  // namespace qroi
