#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sublevel/cnseq.hpp"
#include "sublevel/common.hpp"

using namespace sublevel;

TEST_CASE("base constants") {
  CHECK(log_bound_constant(1) == std::log(0.5));
  // One-step hand evaluation: C_2 = C_1^{1/2} [3 sqrt2/pi]^{1/2} * 2.
  const double c2 = 2.0 * std::sqrt(0.5 * kSmallSetCoeff);
  CHECK(std::exp(log_bound_constant(2)) == doctest::Approx(c2).epsilon(1e-12));
  CHECK_THROWS_AS(log_bound_constant(0), invalid_input);
}

TEST_CASE("log-space iteration equals the linear-space recurrence up to n=50") {
  double c_prev = 0.5;
  for (int n = 2; n <= 50; ++n) {
    const double c_lin = std::pow(c_prev, 1.0 - 1.0 / n) *
                         std::pow(kSmallSetCoeff * (n - 1), 1.0 / n) * n / (n - 1.0);
    CHECK(std::exp(log_bound_constant(n)) == doctest::Approx(c_lin).epsilon(1e-12));
    c_prev = c_lin;
  }
}

// The ratio recurrence r_n = (1 - 1/n) r_{n-1} + a/n telescopes exactly to
// r_n = a + (r_1 - a)/n, an independent closed form for any n.
TEST_CASE("closed-form oracle at large n") {
  const double a = std::log(kSmallSetCoeff);
  for (std::int64_t n : {1000L, 250'000L, 1'000'000L}) {
    const double expected = a + (std::log(0.5) - a) / static_cast<double>(n);
    const double got = log_bound_constant(n) - std::log(static_cast<double>(n));
    CHECK(got == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("series checkpoints and convergence diagnostics") {
  const BoundConstantSeries s = bound_constant_series(1'000'000, 21);
  REQUIRE(s.n_checkpoints.size() >= 2);
  CHECK(s.n_checkpoints.front() == 1);
  CHECK(s.n_checkpoints.back() == 1'000'000);
  CHECK(s.ratio.front() == doctest::Approx(0.5));
  for (double r : s.ratio) CHECK(r > 0.0);
  for (double lc : s.log_cn) CHECK(std::isfinite(lc));

  // Ratio differences shrink over the checkpoint tail (empirical convergence).
  for (std::size_t i = s.ratio.size() / 2; i + 2 < s.ratio.size(); ++i) {
    const double d1 = std::abs(s.ratio[i + 1] - s.ratio[i]);
    const double d2 = std::abs(s.ratio[i + 2] - s.ratio[i + 1]);
    CHECK(d2 <= d1 + 1e-15);
  }
  // Eventually monotone over recorded checkpoints.
  for (std::size_t i = 1; i + 1 < s.ratio.size(); ++i) {
    CHECK(s.ratio[i + 1] >= s.ratio[i] - 1e-12);
  }
  CHECK(s.residue < 1e-10);

  CHECK_THROWS_AS(bound_constant_series(5, 4), invalid_input);
  CHECK_THROWS_AS(bound_constant_series(100, 1), invalid_input);
}
