#include "qroi/numdiff.hpp"

#include <Eigen/Eigenvalues>

namespace qroi::numdiff {

double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

Eigen::Matrix2d hessian_2d(const std::function<double(double, double)>& f, double x,
                           double y, double h) {
  const double f0 = f(x, y);
  Eigen::Matrix2d hess;
  hess(0, 0) = (f(x + h, y) - 2.0 * f0 + f(x - h, y)) / (h * h);
  hess(1, 1) = (f(x, y + h) - 2.0 * f0 + f(x, y - h)) / (h * h);
  hess(0, 1) = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) /
               (4.0 * h * h);
  hess(1, 0) = hess(0, 1);
  return hess;
}

double min_eigenvalue(const Eigen::Matrix2d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace qroi::numdiff
