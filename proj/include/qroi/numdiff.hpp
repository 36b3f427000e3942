#pragma once

#include <functional>

#include <Eigen/Core>

namespace qroi::numdiff {

/// Central difference (f(x+h) - f(x-h)) / (2h). Exact for quadratics.
double central_difference(const std::function<double(double)>& f, double x, double h);

/// Central-difference Hessian of a bivariate function. With the default step
/// the result is truncation-free for objectives that are polynomial of degree
/// <= 2 in each coordinate separately (our squared-residual losses restricted
/// to (lambda, gamma) are), leaving only ~1e-11 rounding error.
Eigen::Matrix2d hessian_2d(const std::function<double(double, double)>& f, double x,
                           double y, double h = 5e-3);

/// Smallest eigenvalue of a symmetric 2x2 matrix.
double min_eigenvalue(const Eigen::Matrix2d& m);

}  // namespace qroi::numdiff
