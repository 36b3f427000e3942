#include "qroi/optim.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "qroi/types.hpp"

namespace qroi::optim {

namespace {

Eigen::VectorXd clamp_to_box(const Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper) {
  return x.cwiseMax(lower).cwiseMin(upper);
}

double projected_gradient_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& grad,
                               const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  return (x - clamp_to_box(x - grad, lower, upper)).norm();
}

}  // namespace

BoxedLmResult minimize_box_lm(const LeastSquaresProblem& problem,
                              const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                              const Eigen::VectorXd& start, const BoxedLmOptions& opts) {
  const Eigen::Index dim = start.size();
  if (lower.size() != dim || upper.size() != dim) {
    throw ConfigError("box bounds do not match the start dimension");
  }
  if (opts.max_iters < 1) throw ConfigError("max_iters must be >= 1");

  BoxedLmResult out;
  out.x = clamp_to_box(start, lower, upper);
  Eigen::VectorXd r = problem.residuals(out.x);
  out.loss = r.squaredNorm();

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    out.iterations = iter;
    const Eigen::MatrixXd jac = problem.jacobian(out.x);
    const Eigen::VectorXd grad = 2.0 * jac.transpose() * r;

    out.grad_norm = projected_gradient_norm(out.x, grad, lower, upper);
    if (out.grad_norm <= opts.grad_tol) {
      out.converged = true;
      return out;
    }

    Eigen::MatrixXd normal = jac.transpose() * jac;
    const double nu = opts.damping * (1.0 + normal.trace() / static_cast<double>(dim));
    normal.diagonal().array() += nu;
    const Eigen::VectorXd direction = normal.ldlt().solve(-0.5 * grad);

    // Armijo backtracking along the projection arc.
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    Eigen::VectorXd r_candidate;
    double loss_candidate = out.loss;
    for (int bt = 0; bt < 60; ++bt) {
      candidate = clamp_to_box(out.x + step * direction, lower, upper);
      const Eigen::VectorXd move = candidate - out.x;
      if (move.norm() == 0.0) break;
      r_candidate = problem.residuals(candidate);
      loss_candidate = r_candidate.squaredNorm();
      // min(0, .) keeps the accepted sequence non-increasing even when the
      // projected move loses alignment with the descent direction.
      if (loss_candidate <= out.loss + opts.armijo_c * std::min(0.0, grad.dot(move))) {
        accepted = true;
        break;
      }
      step *= opts.backtrack;
    }
    if (!accepted) {
      // No admissible decrease left at this scale.
      out.converged = out.grad_norm <= opts.grad_tol;
      return out;
    }

    const double step_len = (candidate - out.x).norm();
    out.x = candidate;
    r = r_candidate;
    out.loss = loss_candidate;
    out.iterations = iter + 1;
    if (opts.on_iteration) opts.on_iteration(out.iterations, out.loss);

    if (step_len <= opts.step_tol) {
      out.converged = true;
      const Eigen::MatrixXd jac_final = problem.jacobian(out.x);
      out.grad_norm =
          projected_gradient_norm(out.x, 2.0 * jac_final.transpose() * r, lower, upper);
      return out;
    }
  }

  const Eigen::MatrixXd jac_final = problem.jacobian(out.x);
  out.grad_norm =
      projected_gradient_norm(out.x, 2.0 * jac_final.transpose() * r, lower, upper);
  out.converged = out.grad_norm <= opts.grad_tol;
  return out;
}

std::vector<Eigen::VectorXd> halton_points(int n, int dim) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  if (dim < 1 || dim > 8) throw ConfigError("halton_points supports dim in [1, 8]");
  std::vector<Eigen::VectorXd> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    Eigen::VectorXd p(dim);
    for (int d = 0; d < dim; ++d) {
      const int base = kPrimes[d];
      double value = 0.0;
      double f = 1.0 / base;
      int k = i;
      while (k > 0) {
        value += f * (k % base);
        k /= base;
        f /= base;
      }
      p[d] = value;
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace qroi::optim
