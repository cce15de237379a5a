#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "ocal/error.hpp"
#include "ocal/kde.hpp"
#include "support/helpers.hpp"

using namespace ocal;

namespace {

double scalar_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

}  // namespace

TEST_SUITE("kde") {

TEST_CASE("bandwidth: floor for a single point, Silverman otherwise") {
  Matrix one(1, 1);
  one << 0.0;
  CHECK(fit_kde(one).bandwidth()[0] == kMinBandwidth);

  const Matrix x = testing::gaussian(100, 1, 4);
  const double mean = x.mean();
  const double sd = std::sqrt((x.array() - mean).square().sum() / 99.0);
  CHECK(fit_kde(x).bandwidth()[0] == doctest::Approx(1.06 * sd * std::pow(100.0, -0.2)).epsilon(1e-12));
  CHECK_THROWS_AS(fit_kde(Matrix(0, 1)), ContractError);
}

TEST_CASE("density examples") {
  Matrix p(1, 1);
  p << 0.0;
  const KdeModel m(p, {1.0});
  const std::array<double, 1> zero{0.0};
  CHECK(m.density(zero) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
  const std::array<double, 1> far{40.0};
  CHECK(m.density(far) >= 0.0);
  CHECK(std::isfinite(m.log_density(far)));
  CHECK(m.log_density(far) == doctest::Approx(-800.0 - std::log(std::sqrt(2.0 * std::numbers::pi))));

  Matrix two(2, 1);
  two << -1.0, 3.0;
  const KdeModel s(two, {0.7});
  const std::array<double, 1> l{1.0 - 0.4}, r{1.0 + 0.4};
  CHECK(s.density(l) == doctest::Approx(s.density(r)).epsilon(1e-12));
  const std::array<double, 2> wrong{0.0, 0.0};
  CHECK_THROWS_AS(s.density(wrong), ContractError);
}

TEST_CASE("1-D density integrates to one") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Matrix x = testing::gaussian(30, 1, seed, 2.0);
    const KdeModel m = fit_kde(x);
    const double h = m.bandwidth()[0];
    const double lo = x.minCoeff() - 8 * h, hi = x.maxCoeff() + 8 * h;
    const int steps = 20000;
    const double dx = (hi - lo) / steps;
    double area = 0.0;
    for (int k = 0; k <= steps; ++k) {
      const std::array<double, 1> t{lo + k * dx};
      area += (k == 0 || k == steps ? 0.5 : 1.0) * m.density(t);
    }
    CHECK(std::abs(area * dx - 1.0) <= 1e-3);
  }
}

TEST_CASE("posterior examples and monotonicity") {
  CHECK(posterior(2.0, 1.0, 0.5) == 1.0);
  CHECK(posterior(0.0, 1.0, 0.7) == 0.0);
  CHECK(posterior(3.0, 1.0, 0.0) == 0.0);
  CHECK(posterior(1.0, 0.0, 0.5) == 1.0);
  double prev = 0.0;
  for (double d = 0.0; d <= 1.0; d += 0.05) {
    CHECK(posterior(0.3, 1.0, d) >= prev);
    prev = posterior(0.3, 1.0, d);
  }
  CHECK(posterior(0.3, 1.0, 0.5) <= posterior(0.6, 1.0, 0.5));
  CHECK(posterior(0.3, 1.0, 0.5) >= posterior(0.3, 2.0, 0.5));
}

TEST_CASE("expected margin: ratio 1 gives 0.5 over the ten-point grid") {
  CHECK(expected_margin_score(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(expected_margin_score(0.0, 1.0) == 1.0);
  CHECK(expected_margin_score(1e9, 1.0) == 1.0);
}

TEST_CASE("entropy score against a scalar enumeration") {
  double ref = 0.0;
  for (int k = 1; k <= 10; ++k) ref += scalar_entropy(0.1 * k);
  CHECK(entropy_score(1.0, 1.0) == doctest::Approx(ref / 10.0).epsilon(1e-12));
  CHECK(entropy_score(0.0, 1.0) == 0.0);
  // ratio 1/delta puts every grid point at or above 0.5; ratio 0.5/0.1 saturates
  CHECK(entropy_score(1.0, 2.0) == doctest::Approx([] {
          double s = 0.0;
          for (int k = 1; k <= 10; ++k) s += scalar_entropy(0.05 * k);
          return s / 10.0;
        }()).epsilon(1e-12));
}

TEST_CASE("scores are bounded and depend only on the ratio") {
  for (double pt : {0.0, 1e-5, 0.2, 1.0, 7.0}) {
    for (double pu : {1e-3, 0.5, 3.0}) {
      const double em = expected_margin_score(pt, pu);
      const double en = entropy_score(pt, pu);
      CHECK(em >= 0.0);
      CHECK(em <= 1.0);
      CHECK(en >= 0.0);
      CHECK(en <= std::log(2.0) + 1e-15);
      CHECK(expected_margin_score(4 * pt, 4 * pu) == doctest::Approx(em).epsilon(1e-12));
      CHECK(entropy_score(4 * pt, 4 * pu) == doctest::Approx(en).epsilon(1e-12));
    }
  }
}

}  // TEST_SUITE
