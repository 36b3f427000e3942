#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace qroi {

inline constexpr const char* kVersion = "0.1.0";

/// Argument outside its mathematical domain (box violations, bad constants).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or degenerate input data (bad CSV cells, constant regressors).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Required CSV column missing from the header row.
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

/// Invalid scenario or run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Statistic undefined for the given inputs (e.g. SE from one replication).
class StatisticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Period with zero ROI change; the dynamic impact index is undefined there.
/// Callers skip such periods and flag them in their output.
class DegeneratePeriodError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Latent behavioral triple: efficiency sensitivity (lambda), fairness
/// preference (gamma) and temporal responsiveness. All live in [0, 1];
/// the upper bound is configurable for exploratory use.
struct BehavioralParams {
  double lambda = 0.0;
  double gamma = 0.0;
  double temporal = 0.0;

  void validate(double upper = 1.0) const;

  Eigen::Vector3d vec() const { return Eigen::Vector3d(lambda, gamma, temporal); }
  static BehavioralParams from_vec(const Eigen::Vector3d& v) {
    return BehavioralParams{v[0], v[1], v[2]};
  }
};

/// Constants of the reference forward model: saturating-exponential QALY
/// response, linear cost, and the exponential temporal weight.
struct ForwardModelConfig {
  double saturation_rate = 5.0;      ///< k, per action unit
  double q_max = 1.0;                ///< QALY ceiling
  double unit_cost = 1.0;            ///< marginal cost c per action unit
  double a_max = 2.0;                ///< largest feasible action
  double decay_rate = 1.0;           ///< rho, decay penalty in the dynamic index
  double response_timescale = 12.5;  ///< tau of the temporal weight, periods

  void validate() const;
};

/// Time-indexed (action, qaly, roi) observations stored column-wise.
/// Period indices are strictly increasing and at least two records are
/// required (period differences are needed downstream).
class ObservationSeries {
 public:
  ObservationSeries(Eigen::VectorXi periods, Eigen::VectorXd actions,
                    Eigen::VectorXd qalys, Eigen::VectorXd rois, double a_max);

  Eigen::Index size() const { return periods_.size(); }
  const Eigen::VectorXi& periods() const { return periods_; }
  const Eigen::VectorXd& actions() const { return actions_; }
  const Eigen::VectorXd& qalys() const { return qalys_; }
  const Eigen::VectorXd& rois() const { return rois_; }
  double action_bound() const { return a_max_; }

  /// Same schedule and actions, replaced outcome column.
  ObservationSeries with_qalys(Eigen::VectorXd qalys) const;

 private:
  Eigen::VectorXi periods_;
  Eigen::VectorXd actions_;
  Eigen::VectorXd qalys_;
  Eigen::VectorXd rois_;
  double a_max_;
};

}  // namespace qroi
