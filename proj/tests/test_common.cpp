#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sublevel/common.hpp"

using namespace sublevel;

TEST_CASE("pairwise sum matches a compensated reference") {
  SmallRng rng(7);
  std::vector<double> v;
  for (int i = 0; i < 10007; ++i) v.push_back(rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-8, 8)));
  NeumaierSum ref;
  for (double x : v) ref.add(x);
  CHECK(pairwise_sum(v) == doctest::Approx(ref.value()).epsilon(1e-12));
}

TEST_CASE("blocked sum is identical in serial and parallel") {
  auto f = [](std::int64_t i) { return std::sin(0.001 * static_cast<double>(i)) / (i + 1.0); };
  const double serial = blocked_sum(250'000, f, false);
  set_thread_cap(2);
  const double parallel = blocked_sum(250'000, f, true);
  CHECK(serial == parallel);  // bit identity, not approximation
}

TEST_CASE("neumaier compensation holds tiny increments") {
  NeumaierSum s;
  s.add(1.0);
  for (int i = 0; i < 1'000'000; ++i) s.add(1e-16);
  CHECK(s.value() == doctest::Approx(1.0 + 1e-10).epsilon(1e-12));
}

TEST_CASE("counter stream is pure and seed-sensitive") {
  CHECK(stream(42, 7) == stream(42, 7));
  CHECK(stream(42, 7) != stream(42, 8));
  CHECK(stream(42, 7) != stream(43, 7));
  const double u = to_unit(stream(0, 0));
  CHECK(u >= 0.0);
  CHECK(u < 1.0);
}

TEST_CASE("small rng bounds") {
  SmallRng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t k = rng.below(7);
    CHECK(k >= 0);
    CHECK(k < 7);
    const double x = rng.uniform(2.0, 3.0);
    CHECK(x >= 2.0);
    CHECK(x < 3.0);
  }
}
