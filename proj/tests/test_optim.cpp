#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qroi/numdiff.hpp"
#include "qroi/optim.hpp"

using namespace qroi;

TEST_CASE("halton points are deterministic, in the cube, low discrepancy") {
  const auto pts = optim::halton_points(8, 3);
  REQUIRE(pts.size() == 8);
  for (const auto& p : pts) {
    for (int d = 0; d < 3; ++d) {
      CHECK(p[d] > 0.0);
      CHECK(p[d] < 1.0);
    }
  }
  // First base-2 values: 1/2, 1/4, 3/4, ...
  CHECK(pts[0][0] == doctest::Approx(0.5));
  CHECK(pts[1][0] == doctest::Approx(0.25));
  CHECK(pts[2][0] == doctest::Approx(0.75));
  CHECK(pts[0][1] == doctest::Approx(1.0 / 3.0));
  CHECK(pts[0][2] == doctest::Approx(0.2));
  const auto again = optim::halton_points(8, 3);
  for (int i = 0; i < 8; ++i) CHECK(pts[i] == again[i]);
}

TEST_CASE("least squares on a linear model reaches the normal equations") {
  // Residuals r_i = y_i - (a + b x_i): exact solution known.
  const std::vector<double> xs = {0.0, 1.0, 2.0, 3.0};
  const std::vector<double> ys = {1.0, 3.0, 5.0, 7.0};  // a = 1, b = 2
  optim::LeastSquaresProblem problem;
  problem.residuals = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(4);
    for (int i = 0; i < 4; ++i) r[i] = ys[i] - (p[0] + p[1] * xs[i]);
    return r;
  };
  problem.jacobian = [&](const Eigen::VectorXd&) {
    Eigen::MatrixXd jac(4, 2);
    for (int i = 0; i < 4; ++i) {
      jac(i, 0) = -1.0;
      jac(i, 1) = -xs[i];
    }
    return jac;
  };
  Eigen::VectorXd lower(2), upper(2), start(2);
  lower << -10.0, -10.0;
  upper << 10.0, 10.0;
  start << 0.0, 0.0;
  const auto result = optim::minimize_box_lm(problem, lower, upper, start, {});
  CHECK(result.converged);
  CHECK(result.x[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(result.x[1] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(result.loss == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("box constraints pin the solution to the boundary") {
  // Minimize (x - 2)^2 over [0, 1]: optimum at x = 1.
  optim::LeastSquaresProblem problem;
  problem.residuals = [](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(1);
    r[0] = p[0] - 2.0;
    return r;
  };
  problem.jacobian = [](const Eigen::VectorXd&) {
    Eigen::MatrixXd jac(1, 1);
    jac(0, 0) = 1.0;
    return jac;
  };
  Eigen::VectorXd lower(1), upper(1), start(1);
  lower << 0.0;
  upper << 1.0;
  start << 0.2;
  const auto result = optim::minimize_box_lm(problem, lower, upper, start, {});
  CHECK(result.converged);
  CHECK(result.x[0] == doctest::Approx(1.0).epsilon(1e-12));
  // Projected gradient vanishes at the active bound.
  CHECK(result.grad_norm <= 1e-8);
}

TEST_CASE("loss sequence is non-increasing on the Rosenbrock residuals") {
  optim::LeastSquaresProblem problem;
  problem.residuals = [](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(2);
    r[0] = 10.0 * (p[1] - p[0] * p[0]);
    r[1] = 1.0 - p[0];
    return r;
  };
  problem.jacobian = [](const Eigen::VectorXd& p) {
    Eigen::MatrixXd jac(2, 2);
    jac(0, 0) = -20.0 * p[0];
    jac(0, 1) = 10.0;
    jac(1, 0) = -1.0;
    jac(1, 1) = 0.0;
    return jac;
  };
  Eigen::VectorXd lower(2), upper(2), start(2);
  lower << -2.0, -2.0;
  upper << 2.0, 2.0;
  start << -1.2, 1.0;
  optim::BoxedLmOptions opts;
  std::vector<double> losses;
  opts.on_iteration = [&losses](int, double loss) { losses.push_back(loss); };
  const auto result = optim::minimize_box_lm(problem, lower, upper, start, opts);
  CHECK(result.converged);
  CHECK(result.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(result.x[1] == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE(losses.size() > 1);
  for (std::size_t i = 1; i < losses.size(); ++i) CHECK(losses[i] <= losses[i - 1]);
}

TEST_CASE("central differences are exact on quadratics") {
  const auto fn = [](double x) { return 3.0 * x * x - 2.0 * x + 1.0; };
  CHECK(numdiff::central_difference(fn, 1.0, 0.1) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(numdiff::central_difference(fn, -0.5, 0.37) ==
        doctest::Approx(-5.0).epsilon(1e-12));
}

TEST_CASE("2d hessian recovers quadratic forms and eigenvalues") {
  const auto fn = [](double x, double y) {
    return 2.0 * x * x + 3.0 * y * y + 1.5 * x * y + x - y;
  };
  const Eigen::Matrix2d hess = numdiff::hessian_2d(fn, 0.3, -0.4);
  CHECK(hess(0, 0) == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(hess(1, 1) == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(hess(0, 1) == doctest::Approx(1.5).epsilon(1e-8));
  Eigen::Matrix2d exact;
  exact << 4.0, 1.5, 1.5, 6.0;
  const double expected =
      5.0 - std::sqrt(1.0 + 1.5 * 1.5);  // eigenvalues of [[4,1.5],[1.5,6]]
  CHECK(numdiff::min_eigenvalue(exact) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(numdiff::min_eigenvalue(hess) == doctest::Approx(expected).epsilon(1e-7));
}
