#pragma once

#include <string>

#include <Eigen/Core>

#include "qroi/types.hpp"

namespace qroi::stats {

double mean(const Eigen::VectorXd& x);

/// Sample standard deviation (n - 1 denominator). Needs n >= 2.
double sample_sd(const Eigen::VectorXd& x);

/// Standard error of the mean, sample_sd / sqrt(n).
double standard_error(const Eigen::VectorXd& x);

/// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
/// Gauss continued fraction evaluated with the modified Lentz scheme.
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a Student-t statistic with df degrees of freedom,
/// p = I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

struct WelchTest {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
};

/// Unequal-variance two-sample t test from per-arm summaries. Standard
/// errors of zero are degenerate: equal means give t = 0 / p = 1, unequal
/// means are flagged with t = +/-inf and p = 0.
WelchTest welch_t_test(double mean1, double se1, int n1, double mean2, double se2,
                       int n2);

/// Significance stars: * p<0.05, ** p<0.01, *** p<0.001, else "ns".
std::string significance_label(double p_two_sided);

}  // namespace qroi::stats
