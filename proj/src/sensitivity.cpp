#include "qroi/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qroi/parallel.hpp"
#include "qroi/rng.hpp"

namespace qroi {

namespace {

constexpr std::uint64_t kTagRobustStart = 0x91;
constexpr std::uint64_t kTagRobustJitter = 0x92;

double& select(BehavioralParams& p, WhichParam which) {
  switch (which) {
    case WhichParam::Lambda: return p.lambda;
    case WhichParam::Gamma: return p.gamma;
    default: return p.temporal;
  }
}

double evaluate_or_advise(const SiiObjective& objective, const BehavioralParams& at,
                          double fraction) {
  double value;
  try {
    value = objective(at);
  } catch (const std::exception& e) {
    throw DomainError(std::string("objective rejected a perturbed point (") + e.what() +
                      "); use a smaller fraction");
  }
  if (!std::isfinite(value)) {
    throw DomainError("objective is non-finite at a perturbed point; use a smaller fraction");
  }
  return value;
}

struct DrawResult {
  bool ok = false;
  Eigen::Vector3d theta = Eigen::Vector3d::Zero();
};

RobustnessSummary::ParamStats summarize(const std::vector<double>& xs) {
  RobustnessSummary::ParamStats s;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.std = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return s;
}

}  // namespace

SensitivityValue sensitivity_coefficient(const SiiObjective& objective,
                                         const BehavioralParams& baseline,
                                         WhichParam which, double fraction) {
  if (!objective) throw ConfigError("sensitivity needs an objective");
  if (!(fraction > 0.0) || !std::isfinite(fraction)) {
    throw DomainError("perturbation fraction must be positive and finite");
  }
  BehavioralParams up = baseline;
  BehavioralParams down = baseline;
  const double theta = select(up, which);
  const double step = theta != 0.0 ? fraction * std::fabs(theta) : fraction;
  select(up, which) = theta + step;
  select(down, which) = theta - step;

  const double f_up = evaluate_or_advise(objective, up, fraction);
  const double f_down = evaluate_or_advise(objective, down, fraction);
  const double f_base = evaluate_or_advise(objective, baseline, fraction);

  SensitivityValue out;
  out.perturbation_fraction = fraction;
  out.raw_coefficient = (f_up - f_down) / (2.0 * step);
  if (f_base != 0.0) {
    out.elasticity = out.raw_coefficient * theta / f_base;
  }
  return out;
}

SensitivityReport full_report(const SiiObjective& objective,
                              const BehavioralParams& baseline, double fraction,
                              const std::string& objective_label) {
  SensitivityReport report;
  report.lambda = sensitivity_coefficient(objective, baseline, WhichParam::Lambda, fraction);
  report.gamma = sensitivity_coefficient(objective, baseline, WhichParam::Gamma, fraction);
  report.temporal =
      sensitivity_coefficient(objective, baseline, WhichParam::Temporal, fraction);
  report.baseline_value = evaluate_or_advise(objective, baseline, fraction);
  report.objective_label = objective_label;
  return report;
}

FieldGrid sensitivity_field(const SiiObjective& objective,
                            const Eigen::VectorXd& lambda_axis,
                            const Eigen::VectorXd& gamma_axis, double fixed_t) {
  if (!objective) throw ConfigError("sensitivity field needs an objective");
  if (lambda_axis.size() == 0 || gamma_axis.size() == 0) {
    throw DomainError("field axes must be non-empty");
  }
  auto check_axis = [](const Eigen::VectorXd& axis, const char* name) {
    for (Eigen::Index i = 0; i < axis.size(); ++i) {
      if (!(axis[i] >= 0.0 && axis[i] <= 1.0)) {
        throw DomainError(std::string(name) + " axis must lie in [0, 1]");
      }
      if (i > 0 && !(axis[i] > axis[i - 1])) {
        throw DomainError(std::string(name) + " axis must be strictly increasing");
      }
    }
  };
  check_axis(lambda_axis, "lambda");
  check_axis(gamma_axis, "gamma");

  FieldGrid grid;
  grid.lambda_axis = lambda_axis;
  grid.gamma_axis = gamma_axis;
  grid.values.resize(lambda_axis.size(), gamma_axis.size());
  for (Eigen::Index i = 0; i < lambda_axis.size(); ++i) {
    for (Eigen::Index j = 0; j < gamma_axis.size(); ++j) {
      grid.values(i, j) =
          objective(BehavioralParams{lambda_axis[i], gamma_axis[j], fixed_t});
    }
  }
  grid.values.array() -= grid.values(0, 0);
  return grid;
}

RobustnessSummary robustness_study(const ObservationSeries& data,
                                   const InverseConfig& icfg,
                                   const ForwardModelConfig& fcfg, double fraction,
                                   int n_draws, std::uint64_t seed, int threads) {
  if (!(fraction >= 0.0) || !std::isfinite(fraction)) {
    throw DomainError("perturbation fraction must be finite and >= 0");
  }
  if (n_draws < 1) throw ConfigError("n_draws must be >= 1");

  const InverseFit baseline = fit(data, icfg, fcfg);
  const Eigen::Vector3d theta0 = baseline.params.vec();

  std::vector<DrawResult> draws(n_draws);
  parallel_for(n_draws, threads, [&](int d) {
    Eigen::Vector3d start;
    for (int j = 0; j < 3; ++j) {
      const double u = rng::uniform_pm1({seed, kTagRobustStart,
                                         static_cast<std::uint64_t>(d),
                                         static_cast<std::uint64_t>(j)});
      start[j] = std::clamp(theta0[j] * (1.0 + fraction * u), 0.0, 1.0);
    }
    Eigen::VectorXd jittered = data.qalys();
    for (Eigen::Index t = 0; t < jittered.size(); ++t) {
      jittered[t] *= 1.0 + fraction * rng::uniform_pm1({seed, kTagRobustJitter,
                                                        static_cast<std::uint64_t>(d),
                                                        static_cast<std::uint64_t>(t)});
    }
    try {
      const InverseFit refit =
          fit(data.with_qalys(std::move(jittered)), icfg, fcfg, {start});
      draws[d].ok = true;
      draws[d].theta = refit.params.vec();
    } catch (const ConvergenceError&) {
    } catch (const DataError&) {
    }
  });

  std::vector<double> lambdas, gammas, temporals;
  int failed = 0;
  for (const DrawResult& draw : draws) {
    if (!draw.ok) {
      ++failed;
      continue;
    }
    lambdas.push_back(draw.theta[0]);
    gammas.push_back(draw.theta[1]);
    temporals.push_back(draw.theta[2]);
  }
  if (failed * 10 > n_draws) {
    throw StatisticsError("robustness study failed: more than 10% of draws did not fit");
  }

  RobustnessSummary summary;
  summary.lambda = summarize(lambdas);
  summary.gamma = summarize(gammas);
  summary.temporal = summarize(temporals);
  summary.baseline = baseline.params;
  summary.n_draws = n_draws;
  summary.failed_draws = failed;
  summary.fraction = fraction;
  return summary;
}

}  // namespace qroi
