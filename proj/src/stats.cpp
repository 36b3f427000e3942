#include "qroi/stats.hpp"

#include <cmath>
#include <limits>

namespace qroi::stats {

double mean(const Eigen::VectorXd& x) {
  if (x.size() == 0) throw StatisticsError("mean of empty sample");
  return x.mean();
}

double sample_sd(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  if (n < 2) throw StatisticsError("sample sd needs at least 2 values");
  const double m = x.mean();
  return std::sqrt((x.array() - m).square().sum() / static_cast<double>(n - 1));
}

double standard_error(const Eigen::VectorXd& x) {
  return sample_sd(x) / std::sqrt(static_cast<double>(x.size()));
}

namespace {

// Continued fraction for I_x(a,b), modified Lentz iteration.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double f = d;

  for (int m = 1; m <= kMaxIter; ++m) {
    const double dm = static_cast<double>(m);
    // even step
    double num = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
    d = 1.0 + num * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    f *= d * c;
    // odd step
    num = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return f;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw StatisticsError("incomplete_beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw StatisticsError("incomplete_beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  // x^a (1-x)^b / B(a,b); symmetric under (a,b,x) -> (b,a,1-x).
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw StatisticsError("degrees of freedom must be > 0");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

WelchTest welch_t_test(double mean1, double se1, int n1, double mean2, double se2,
                       int n2) {
  if (n1 < 2 || n2 < 2) throw StatisticsError("Welch test needs n >= 2 per arm");
  WelchTest out;
  const double v1 = se1 * se1;
  const double v2 = se2 * se2;
  const double pooled = v1 + v2;
  const double diff = mean2 - mean1;
  if (pooled == 0.0) {
    // Degenerate variance: deterministic arms.
    if (diff == 0.0) {
      out.t = 0.0;
      out.df = static_cast<double>(n1 + n2 - 2);
      out.p_two_sided = 1.0;
    } else {
      out.t = diff > 0.0 ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
      out.df = static_cast<double>(n1 + n2 - 2);
      out.p_two_sided = 0.0;
    }
    return out;
  }
  out.t = diff / std::sqrt(pooled);
  out.df = pooled * pooled /
           (v1 * v1 / static_cast<double>(n1 - 1) + v2 * v2 / static_cast<double>(n2 - 1));
  if (!(out.df > 0.0)) out.df = static_cast<double>(n1 + n2 - 2);
  out.p_two_sided = student_t_two_sided_p(out.t, out.df);
  return out;
}

std::string significance_label(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "ns";
}

}  // namespace qroi::stats
