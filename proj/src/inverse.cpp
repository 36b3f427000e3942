#include "qroi/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qroi/behavioral.hpp"
#include "qroi/numdiff.hpp"
#include "qroi/optim.hpp"
#include "qroi/rng.hpp"

namespace qroi {

namespace {

constexpr std::uint64_t kTagAction = 0x51;
constexpr std::uint64_t kTagNoise = 0x52;
constexpr std::uint64_t kTagStability = 0x53;

// Cached per-series arrays: Q_t = qaly_response(a_t) and the transient
// factor exp(-t / tau), so loss and Jacobian evaluations are vectorized.
struct LossModel {
  Eigen::ArrayXd qaly_obs;
  Eigen::ArrayXd response_base;  // Q_t
  Eigen::ArrayXd transient;      // exp(-t / tau)
  InverseConfig icfg;

  LossModel(const ObservationSeries& data, const InverseConfig& icfg_,
            const ForwardModelConfig& fcfg)
      : icfg(icfg_) {
    const Eigen::Index n = data.size();
    qaly_obs = data.qalys().array();
    response_base.resize(n);
    transient.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      response_base[i] = qaly_response(data.actions()[i], fcfg);
      transient[i] =
          std::exp(-static_cast<double>(data.periods()[i]) / fcfg.response_timescale);
    }
  }

  Eigen::Index n_obs() const { return qaly_obs.size(); }

  Eigen::ArrayXd weights(double temporal) const {
    return 1.0 - (1.0 - temporal) * transient;
  }

  // Residual vector with two trailing prior rows; loss = ||r||^2.
  Eigen::VectorXd residuals(const Eigen::VectorXd& x) const {
    const double lambda = x[0], gamma = x[1], temporal = x[2];
    const Eigen::Index n = n_obs();
    Eigen::VectorXd r(n + 2);
    r.head(n) = qaly_obs - lambda * (1.0 - gamma) * response_base * weights(temporal);
    r[n] = std::sqrt(icfg.beta1) * (lambda - icfg.prior_lambda);
    r[n + 1] = std::sqrt(icfg.beta2) * (gamma - icfg.prior_gamma);
    return r;
  }

  double loss(double lambda, double gamma, double temporal) const {
    return residuals(Eigen::Vector3d(lambda, gamma, temporal)).squaredNorm();
  }

  // Analytic columns for (lambda, gamma); relative central difference for T.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    const double lambda = x[0], gamma = x[1], temporal = x[2];
    const Eigen::Index n = n_obs();
    const Eigen::ArrayXd base = response_base * weights(temporal);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 2, 3);
    jac.col(0).head(n) = -(1.0 - gamma) * base;
    jac.col(1).head(n) = lambda * base;
    const double h = 1e-5 * std::max(1.0, std::fabs(temporal));
    const Eigen::ArrayXd scale = lambda * (1.0 - gamma) * response_base;
    jac.col(2).head(n) =
        ((qaly_obs - scale * weights(temporal + h)) -
         (qaly_obs - scale * weights(temporal - h))) /
        (2.0 * h);
    jac(n, 0) = std::sqrt(icfg.beta1);
    jac(n + 1, 1) = std::sqrt(icfg.beta2);
    return jac;
  }
};

void check_fit_preconditions(const ObservationSeries& data) {
  if (data.size() < 3) throw DataError("fit needs at least 3 records");
  const double var =
      (data.actions().array() - data.actions().mean()).square().sum() /
      static_cast<double>(data.size());
  if (!(var > 0.0)) {
    throw DataError("constant-action series: Var(a_t) = 0, parameters unidentifiable");
  }
}

optim::BoxedLmOptions lm_options(const InverseConfig& icfg) {
  optim::BoxedLmOptions opts;
  opts.grad_tol = icfg.grad_tol;
  opts.step_tol = icfg.step_tol;
  opts.max_iters = icfg.max_iters;
  return opts;
}

InverseFit run_starts(const LossModel& model, const InverseConfig& icfg,
                      const ObservationSeries& data, const ForwardModelConfig& fcfg,
                      const std::vector<Eigen::Vector3d>& starts) {
  optim::LeastSquaresProblem problem;
  problem.residuals = [&model](const Eigen::VectorXd& x) { return model.residuals(x); };
  problem.jacobian = [&model](const Eigen::VectorXd& x) { return model.jacobian(x); };
  const Eigen::VectorXd lower = Eigen::VectorXd::Zero(3);
  const Eigen::VectorXd upper = Eigen::VectorXd::Ones(3);
  const Eigen::Vector3d tie_anchor(icfg.prior_lambda, icfg.prior_gamma, 0.5);

  bool have_converged = false;
  optim::BoxedLmResult best;
  double best_anchor_dist = std::numeric_limits<double>::infinity();
  bool first = true;

  auto better = [&](const optim::BoxedLmResult& cand) {
    if (first) return true;
    if (have_converged && !cand.converged) return false;
    if (cand.converged && !have_converged) return true;
    if (cand.loss < best.loss - 1e-12) return true;
    if (cand.loss > best.loss + 1e-12) return false;
    return (cand.x - tie_anchor).norm() < best_anchor_dist;
  };

  for (const Eigen::Vector3d& start : starts) {
    optim::BoxedLmResult result =
        optim::minimize_box_lm(problem, lower, upper, start, lm_options(icfg));
    if (better(result)) {
      best = result;
      best_anchor_dist = (best.x - tie_anchor).norm();
      have_converged = best.converged;
      first = false;
    }
  }

  InverseFit out;
  out.params = BehavioralParams::from_vec(best.x);
  out.loss = best.loss;
  out.grad_norm = best.grad_norm;
  out.converged = best.converged;
  out.iterations = best.iterations;
  out.hessian_min_eig = convexity_check(data, out.params, icfg, fcfg);
  if (!have_converged) {
    throw ConvergenceError("inverse fit did not converge from any start", out);
  }
  return out;
}

}  // namespace

void InverseConfig::validate() const {
  if (!(beta1 >= 0.0) || !(beta2 >= 0.0)) throw DomainError("beta weights must be >= 0");
  if (prior_lambda < 0.0 || prior_lambda > 1.0 || prior_gamma < 0.0 || prior_gamma > 1.0) {
    throw DomainError("priors must lie in [0, 1]");
  }
  if (!(grad_tol > 0.0) || !(step_tol > 0.0)) throw DomainError("tolerances must be > 0");
  if (max_iters < 1) throw DomainError("max_iters must be >= 1");
  if (n_starts < 1) throw DomainError("n_starts must be >= 1");
}

double inverse_loss(const BehavioralParams& params, const ObservationSeries& data,
                    const InverseConfig& icfg, const ForwardModelConfig& fcfg) {
  icfg.validate();
  params.validate();
  return LossModel(data, icfg, fcfg).loss(params.lambda, params.gamma, params.temporal);
}

InverseFit fit(const ObservationSeries& data, const InverseConfig& icfg,
               const ForwardModelConfig& fcfg) {
  icfg.validate();
  check_fit_preconditions(data);
  std::vector<Eigen::Vector3d> starts;
  for (const Eigen::VectorXd& p : optim::halton_points(icfg.n_starts, 3)) {
    starts.emplace_back(p[0], p[1], p[2]);
  }
  return run_starts(LossModel(data, icfg, fcfg), icfg, data, fcfg, starts);
}

InverseFit fit(const ObservationSeries& data, const InverseConfig& icfg,
               const ForwardModelConfig& fcfg,
               const std::vector<Eigen::Vector3d>& starts) {
  icfg.validate();
  check_fit_preconditions(data);
  if (starts.empty()) throw ConfigError("fit needs at least one start point");
  return run_starts(LossModel(data, icfg, fcfg), icfg, data, fcfg, starts);
}

double convexity_check(const ObservationSeries& data, const BehavioralParams& at,
                       const InverseConfig& icfg, const ForwardModelConfig& fcfg) {
  icfg.validate();
  at.validate();
  const LossModel model(data, icfg, fcfg);
  const double temporal = at.temporal;
  const auto slice = [&model, temporal](double lambda, double gamma) {
    return model.loss(lambda, gamma, temporal);
  };
  return numdiff::min_eigenvalue(numdiff::hessian_2d(slice, at.lambda, at.gamma));
}

StabilityReport stability_probe(const ObservationSeries& data, const InverseConfig& icfg,
                                const ForwardModelConfig& fcfg,
                                const std::vector<double>& deltas, int n_probes,
                                std::uint64_t seed) {
  if (n_probes < 1) throw ConfigError("n_probes must be >= 1");
  for (double d : deltas) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("deltas must be finite and >= 0");
  }
  const InverseFit baseline = fit(data, icfg, fcfg);
  const Eigen::Vector3d theta0 = baseline.params.vec();

  StabilityReport report;
  report.perturbation_sizes = deltas;
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    const double delta = deltas[di];
    double shift_sum = 0.0;
    for (int probe = 0; probe < n_probes; ++probe) {
      Eigen::VectorXd perturbed = data.qalys();
      for (Eigen::Index t = 0; t < perturbed.size(); ++t) {
        perturbed[t] += delta * rng::uniform_pm1({seed, kTagStability, di,
                                                  static_cast<std::uint64_t>(probe),
                                                  static_cast<std::uint64_t>(t)});
      }
      const InverseFit refit = fit(data.with_qalys(std::move(perturbed)), icfg, fcfg);
      shift_sum += (refit.params.vec() - theta0).norm();
    }
    const double mean_shift = shift_sum / n_probes;
    report.parameter_shifts.push_back(mean_shift);
    report.lipschitz_ratios.push_back(delta > 0.0 ? mean_shift / delta : 0.0);
  }
  return report;
}

ObservationSeries synthetic_series(const BehavioralParams& truth, int n,
                                   double noise_sigma, std::uint64_t seed,
                                   const ForwardModelConfig& fcfg) {
  truth.validate();
  fcfg.validate();
  if (n < 2) throw DataError("synthetic series needs n >= 2");
  if (!(noise_sigma >= 0.0)) throw DomainError("noise_sigma must be >= 0");

  Eigen::VectorXi periods(n);
  Eigen::VectorXd actions(n), qalys(n), rois(n);
  for (int t = 0; t < n; ++t) {
    periods[t] = t;
    const double u = rng::uniform01({seed, kTagAction, static_cast<std::uint64_t>(t)});
    actions[t] = fcfg.a_max * (0.1 + 0.8 * u);
    const double clean = detail::response_unchecked(
        qaly_response(actions[t], fcfg), static_cast<double>(t), truth.lambda,
        truth.gamma, truth.temporal, fcfg.response_timescale);
    qalys[t] =
        clean + noise_sigma * rng::normal({seed, kTagNoise, static_cast<std::uint64_t>(t)});
    rois[t] = 0.05 * t;
  }
  return ObservationSeries(std::move(periods), std::move(actions), std::move(qalys),
                           std::move(rois), fcfg.a_max);
}

}  // namespace qroi
