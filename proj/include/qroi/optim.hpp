#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace qroi::optim {

/// Nonlinear least-squares problem sum_i r_i(x)^2 over a box.
struct LeastSquaresProblem {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residuals;
  /// Jacobian of the residual vector, n_residuals x dim.
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
};

struct BoxedLmOptions {
  double grad_tol = 1e-8;   ///< on the projected gradient norm
  double step_tol = 1e-10;  ///< on the accepted step length
  int max_iters = 500;
  double armijo_c = 1e-4;
  double backtrack = 0.5;   ///< step shrink factor, initial step 1.0
  double damping = 1e-8;    ///< Levenberg damping relative to tr(J'J)/dim
  /// Observer of (iteration, loss) after each accepted step.
  std::function<void(int, double)> on_iteration;
};

struct BoxedLmResult {
  Eigen::VectorXd x;
  double loss = 0.0;
  double grad_norm = 0.0;  ///< projected gradient norm at the final iterate
  int iterations = 0;
  bool converged = false;
};

/// Projected damped Gauss-Newton with Armijo backtracking. Each iteration
/// solves (J'J + nu I) d = -J'r, projects x + s d onto the box and halves s
/// until sufficient decrease holds; the loss sequence is non-increasing.
/// Deterministic for fixed inputs.
BoxedLmResult minimize_box_lm(const LeastSquaresProblem& problem,
                              const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                              const Eigen::VectorXd& start, const BoxedLmOptions& opts);

/// First n points of the Halton sequence in the unit cube, using the first
/// `dim` primes as bases. Fixed low-discrepancy multi-start set.
std::vector<Eigen::VectorXd> halton_points(int n, int dim);

}  // namespace qroi::optim
