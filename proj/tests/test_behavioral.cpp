#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qroi/behavioral.hpp"

using namespace qroi;

namespace {

ForwardModelConfig unit_config() {
  ForwardModelConfig cfg;
  cfg.saturation_rate = 5.0;
  cfg.q_max = 1.0;
  cfg.unit_cost = 1.0;
  cfg.a_max = 2.0;
  cfg.response_timescale = 10.0;
  return cfg;
}

}  // namespace

TEST_CASE("qaly_response basics") {
  const ForwardModelConfig cfg = unit_config();
  CHECK(qaly_response(0.0, cfg) == 0.0);
  // 1 - exp(-5 * 0.3219) = 1 - 0.2 up to the rounding of the input.
  CHECK(qaly_response(0.3219, cfg) == doctest::Approx(0.8).epsilon(1e-4));
  CHECK(qaly_response(std::log(5.0) / 5.0, cfg) == doctest::Approx(0.8).epsilon(1e-12));
  // Saturation: approaches q_max from below when k * a_max >> 1.
  const double near_max = qaly_response(cfg.a_max, cfg);
  CHECK(near_max < cfg.q_max);
  CHECK(near_max == doctest::Approx(cfg.q_max).epsilon(1e-4));
  CHECK_THROWS_AS(qaly_response(-0.1, cfg), DomainError);
  CHECK_THROWS_AS(qaly_response(cfg.a_max + 0.1, cfg), DomainError);
}

TEST_CASE("qaly_response is monotone and concave") {
  const ForwardModelConfig cfg = unit_config();
  double prev = qaly_response(0.0, cfg);
  double prev_inc = -1.0;
  bool first = true;
  for (int i = 1; i <= 200; ++i) {
    const double a = cfg.a_max * i / 200.0;
    const double q = qaly_response(a, cfg);
    CHECK(q > prev);
    const double inc = q - prev;
    if (!first) CHECK(inc < prev_inc);
    prev_inc = inc;
    prev = q;
    first = false;
  }
}

TEST_CASE("utility trivial cases") {
  const ForwardModelConfig cfg = unit_config();
  CHECK(utility(0.0, 0.3, cfg) == 0.0);
  CHECK(utility(0.7, 0.0, cfg) == qaly_response(0.7, cfg));
  CHECK(utility(0.7, 1.0, cfg) == doctest::Approx(-cfg.unit_cost * 0.7));
  CHECK_THROWS_AS(utility(0.5, -0.1, cfg), DomainError);
  CHECK_THROWS_AS(utility(0.5, 1.1, cfg), DomainError);
}

TEST_CASE("optimal_action closed form and corners") {
  const ForwardModelConfig cfg = unit_config();
  // Hand-solved first-order condition at gamma = 1/2: a* = ln(5)/5.
  CHECK(optimal_action(0.5, cfg) == doctest::Approx(std::log(5.0) / 5.0).epsilon(1e-12));
  CHECK(optimal_action(0.0, cfg) == cfg.a_max);
  // Threshold gamma = q_max k / (q_max k + c) = 5/6 kills the interior gain.
  CHECK(optimal_action(5.0 / 6.0, cfg) == 0.0);
  CHECK(optimal_action(0.9, cfg) == 0.0);
  CHECK(optimal_action(1.0, cfg) == 0.0);
}

TEST_CASE("optimal_action is non-increasing in gamma") {
  const ForwardModelConfig cfg = unit_config();
  double prev = optimal_action(0.0, cfg);
  for (int i = 1; i <= 100; ++i) {
    const double a = optimal_action(i / 100.0, cfg);
    CHECK(a <= prev + 1e-15);
    prev = a;
  }
}

TEST_CASE("optimal_action maximizes utility over a dense grid") {
  const ForwardModelConfig cfg = unit_config();
  for (double gamma : {0.1, 0.3, 0.5, 0.7, 0.85, 0.95}) {
    const double best = utility(optimal_action(gamma, cfg), gamma, cfg);
    for (int i = 0; i <= 2000; ++i) {
      const double a = cfg.a_max * i / 2000.0;
      CHECK(best >= utility(a, gamma, cfg) - 1e-9);
    }
  }
}

TEST_CASE("marginal indifference holds at interior optima") {
  const ForwardModelConfig cfg = unit_config();
  const double h = 1e-5;
  for (double gamma : {0.3, 0.5, 0.7}) {
    const double a_star = optimal_action(gamma, cfg);
    REQUIRE(a_star > 0.0);
    REQUIRE(a_star < cfg.a_max);
    const double dq =
        (qaly_response(a_star + h, cfg) - qaly_response(a_star - h, cfg)) / (2.0 * h);
    const double dc =
        (action_cost(a_star + h, cfg) - action_cost(a_star - h, cfg)) / (2.0 * h);
    const double rhs = gamma / (1.0 - gamma) * dc;
    CHECK(std::fabs(dq - rhs) / std::fabs(rhs) <= 1e-6);
  }
}

TEST_CASE("response_function special cases") {
  const ForwardModelConfig cfg = unit_config();
  SUBCASE("T = 1 removes the transient") {
    const BehavioralParams p{0.8, 0.3, 1.0};
    for (int t : {0, 1, 5, 40}) {
      CHECK(response_function(0.5, t, p, cfg) ==
            doctest::Approx(0.8 * 0.7 * qaly_response(0.5, cfg)).epsilon(1e-14));
    }
  }
  SUBCASE("lambda = 0 kills the response") {
    const BehavioralParams p{0.0, 0.3, 0.5};
    CHECK(response_function(0.9, 3, p, cfg) == 0.0);
  }
  SUBCASE("hand-multiplied transient value") {
    // w(0; 0.5) = 0.5 and qaly_response = 0.8 at a = ln(5)/5.
    const BehavioralParams p{1.0, 0.5, 0.5};
    CHECK(response_function(std::log(5.0) / 5.0, 0, p, cfg) ==
          doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("domain checks") {
    CHECK_THROWS_AS(response_function(0.5, -1, BehavioralParams{0.5, 0.5, 0.5}, cfg),
                    DomainError);
    CHECK_THROWS_AS(response_function(0.5, 1, BehavioralParams{1.5, 0.5, 0.5}, cfg),
                    DomainError);
  }
}

TEST_CASE("response_function monotonicity in the parameters") {
  const ForwardModelConfig cfg = unit_config();
  const double action = 0.6;
  const int period = 4;
  for (int i = 0; i < 10; ++i) {
    const double lo = i / 10.0;
    const double hi = (i + 1) / 10.0;
    CHECK(response_function(action, period, {hi, 0.4, 0.6}, cfg) >=
          response_function(action, period, {lo, 0.4, 0.6}, cfg));
    CHECK(response_function(action, period, {0.7, hi, 0.6}, cfg) <=
          response_function(action, period, {0.7, lo, 0.6}, cfg));
    CHECK(response_function(action, period, {0.7, 0.4, hi}, cfg) >=
          response_function(action, period, {0.7, 0.4, lo}, cfg));
  }
}

TEST_CASE("temporal weight stays within [min(T,1), 1]") {
  const ForwardModelConfig cfg = unit_config();
  for (double temporal : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    for (int t = 0; t <= 100; t += 5) {
      const double w = temporal_weight(t, temporal, cfg);
      CHECK(w >= std::min(temporal, 1.0) - 1e-15);
      CHECK(w <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("observation series invariants") {
  Eigen::VectorXi periods(3);
  periods << 0, 1, 2;
  Eigen::VectorXd actions(3), qalys(3), rois(3);
  actions << 0.1, 0.5, 1.0;
  qalys << 0.2, 0.3, 0.4;
  rois << 0.0, 0.1, 0.2;
  CHECK_NOTHROW(ObservationSeries(periods, actions, qalys, rois, 2.0));

  Eigen::VectorXi bad_periods(3);
  bad_periods << 0, 2, 1;
  CHECK_THROWS_AS(ObservationSeries(bad_periods, actions, qalys, rois, 2.0), DataError);

  Eigen::VectorXd bad_actions(3);
  bad_actions << 0.1, 2.5, 1.0;
  CHECK_THROWS_AS(ObservationSeries(periods, bad_actions, qalys, rois, 2.0), DataError);

  Eigen::VectorXi one(1);
  one << 0;
  Eigen::VectorXd one_d(1);
  one_d << 0.1;
  CHECK_THROWS_AS(ObservationSeries(one, one_d, one_d, one_d, 2.0), DataError);
}
