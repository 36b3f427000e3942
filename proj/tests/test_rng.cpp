#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qroi/rng.hpp"

using namespace qroi;

TEST_CASE("counter streams are deterministic and key-sensitive") {
  CHECK(rng::uniform01({1, 2, 3}) == rng::uniform01({1, 2, 3}));
  CHECK(rng::uniform01({1, 2, 3}) != rng::uniform01({1, 2, 4}));
  CHECK(rng::uniform01({1, 2, 3}) != rng::uniform01({2, 2, 3}));
}

TEST_CASE("uniform01 lies strictly inside (0, 1)") {
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = rng::uniform01({42, i});
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal quantile matches reference points") {
  CHECK(rng::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rng::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(rng::normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-10));
  CHECK(rng::normal_quantile(0.841344746068543) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rng::normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-8));
}

TEST_CASE("normal stream moments") {
  const int n = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng::normal({7, static_cast<std::uint64_t>(i)});
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("distinct streams are uncorrelated") {
  const int n = 1000;
  double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t t = static_cast<std::uint64_t>(i);
    const double x = rng::normal({99, 0, t});
    const double y = rng::normal({99, 1, t});
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double vx = sxx / n - (sx / n) * (sx / n);
  const double vy = syy / n - (sy / n) * (sy / n);
  CHECK(std::fabs(cov / std::sqrt(vx * vy)) < 0.1);
}
