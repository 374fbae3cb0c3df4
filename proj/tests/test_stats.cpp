#include <doctest.h>

#include <random>
#include <vector>

#include "gasket/error.hpp"
#include "gasket/stats.hpp"

using namespace gasket;

TEST_CASE("chi-square of exactly proportional counts is zero") {
  const std::vector<std::uint64_t> obs{50, 30, 20};
  const std::vector<double> exp{0.5, 0.3, 0.2};
  const auto r = stats::chi_square(obs, exp);
  CHECK(r.statistic == doctest::Approx(0.0));
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK(r.degrees_of_freedom == 2);
}

TEST_CASE("chi-square pools sparse cells") {
  const std::vector<std::uint64_t> obs{90, 5, 3, 2};
  const std::vector<double> exp{0.9, 0.04, 0.03, 0.03};
  const auto r = stats::chi_square(obs, exp);
  CHECK(r.cells == 2);
  CHECK(r.degrees_of_freedom == 1);
}

TEST_CASE("chi-square rejects bad input") {
  const std::vector<std::uint64_t> one{10};
  const std::vector<double> p1{1.0};
  try {
    stats::chi_square(one, p1);
    FAIL("expected degenerate_cells");
  } catch (const error& e) {
    CHECK(e.code() == errc::degenerate_cells);
  }
  const std::vector<std::uint64_t> two{10, 10};
  const std::vector<double> bad{0.5, 0.6};
  CHECK_THROWS_AS(stats::chi_square(two, bad), error);
  CHECK_THROWS_AS(stats::chi_square(two, p1), error);
}

TEST_CASE("chi-square tail reference values") {
  // P(chi2_1 > 3.841459) = 0.05, P(chi2_2 > x) = exp(-x/2)
  CHECK(stats::chi_square_tail(3.841459, 1) == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(stats::chi_square_tail(4.0, 2) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("Kolmogorov tail reference values") {
  CHECK(stats::kolmogorov_tail(1.3580986) == doctest::Approx(0.05).epsilon(1e-4));
  CHECK(stats::kolmogorov_tail(1.6276236) == doctest::Approx(0.01).epsilon(1e-4));
  CHECK(stats::kolmogorov_tail(0.1) == 1.0);
  CHECK(stats::kolmogorov_tail(5.0) < 1e-20);
}

TEST_CASE("KS tests are calibrated on uniform data") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int rejections = 0;
  std::vector<double> pvalues;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> a(500);
    std::vector<double> b(400);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    const auto two = stats::ks_two_sample(a, b);
    pvalues.push_back(two.p_value);
    if (stats::ks_uniform(a).p_value < 0.01) ++rejections;
  }
  CHECK(rejections <= 8);
  // the two-sample p-values are themselves roughly uniform
  CHECK(stats::ks_uniform(pvalues).p_value > 0.01);

  std::vector<double> shifted(500);
  for (auto& x : shifted) x = 0.2 + 0.8 * u(rng);
  CHECK(stats::ks_uniform(shifted).p_value < 1e-6);
  CHECK_THROWS_AS(stats::ks_uniform({}), error);
}

TEST_CASE("summary statistics") {
  const std::vector<double> v{1, 2, 3, 4};
  const auto s = stats::summarize(v);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK(s.min == 1);
  CHECK(s.max == 4);
  CHECK_THROWS_AS(stats::summarize(std::vector<double>{}), error);
}
