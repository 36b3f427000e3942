#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qroi/stats.hpp"

using namespace qroi;

TEST_CASE("moments") {
  Eigen::VectorXd x(4);
  x << 1.0, 2.0, 3.0, 4.0;
  CHECK(stats::mean(x) == doctest::Approx(2.5));
  CHECK(stats::sample_sd(x) == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(stats::standard_error(x) == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  Eigen::VectorXd single(1);
  single << 1.0;
  CHECK_THROWS_AS(stats::sample_sd(single), StatisticsError);
}

TEST_CASE("incomplete beta against closed forms") {
  // I_x(1, b) = 1 - (1-x)^b.
  for (double x : {0.1, 0.3, 0.5, 0.9}) {
    for (double b : {0.5, 1.0, 2.0, 7.5}) {
      CHECK(stats::incomplete_beta(1.0, b, x) ==
            doctest::Approx(1.0 - std::pow(1.0 - x, b)).epsilon(1e-12));
    }
  }
  // Symmetry point.
  CHECK(stats::incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  // I_x(2, 3) = 12 (x^2/2 - 2x^3/3 + x^4/4), hand-integrated.
  const double x = 0.25;
  const double oracle = 12.0 * (x * x / 2.0 - 2.0 * x * x * x / 3.0 +
                                x * x * x * x / 4.0);
  CHECK(stats::incomplete_beta(2.0, 3.0, x) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(stats::incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(stats::incomplete_beta(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("student t two-sided p-values") {
  // Cauchy: F(1) = 0.75, so the two-sided p at t = 1 is 0.5.
  CHECK(stats::student_t_two_sided_p(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
  // df = 2: F(t) = 1/2 (1 + t / sqrt(2 + t^2)); at t = sqrt(2), p = 2(1 - F).
  const double t = std::sqrt(2.0);
  const double f = 0.5 * (1.0 + t / std::sqrt(2.0 + t * t));
  CHECK(stats::student_t_two_sided_p(t, 2.0) ==
        doctest::Approx(2.0 * (1.0 - f)).epsilon(1e-10));
  CHECK(stats::student_t_two_sided_p(0.0, 10.0) == 1.0);
  CHECK(stats::student_t_two_sided_p(std::numeric_limits<double>::infinity(), 5.0) == 0.0);
}

TEST_CASE("welch test and labels") {
  const stats::WelchTest same = stats::welch_t_test(1.0, 0.1, 20, 1.0, 0.1, 20);
  CHECK(same.t == doctest::Approx(0.0));
  CHECK(stats::significance_label(same.p_two_sided) == "ns");

  const stats::WelchTest degenerate_equal = stats::welch_t_test(1.0, 0.0, 5, 1.0, 0.0, 5);
  CHECK(degenerate_equal.t == 0.0);
  CHECK(degenerate_equal.p_two_sided == 1.0);

  const stats::WelchTest degenerate_diff = stats::welch_t_test(1.0, 0.0, 5, 2.0, 0.0, 5);
  CHECK(std::isinf(degenerate_diff.t));
  CHECK(degenerate_diff.t > 0.0);
  CHECK(stats::significance_label(degenerate_diff.p_two_sided) == "***");

  const stats::WelchTest strong = stats::welch_t_test(0.0, 0.05, 20, 1.0, 0.05, 20);
  CHECK(strong.t == doctest::Approx(1.0 / std::sqrt(0.005)).epsilon(1e-12));
  CHECK(stats::significance_label(strong.p_two_sided) == "***");

  CHECK_THROWS_AS(stats::welch_t_test(0.0, 0.1, 1, 1.0, 0.1, 20), StatisticsError);
}

TEST_CASE("label thresholds") {
  CHECK(stats::significance_label(0.2) == "ns");
  CHECK(stats::significance_label(0.04) == "*");
  CHECK(stats::significance_label(0.009) == "**");
  CHECK(stats::significance_label(0.0009) == "***");
  CHECK(stats::significance_label(0.05) == "ns");
}
