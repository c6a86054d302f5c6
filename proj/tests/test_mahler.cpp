#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "sublevel/experiments.hpp"
#include "sublevel/mahler.hpp"

using namespace sublevel;

namespace {

AlgebraicPoly real_poly(std::vector<double> c) {
  std::vector<cdouble> z;
  for (double x : c) z.emplace_back(x, 0.0);
  return AlgebraicPoly(std::move(z));
}

// Monic polynomial with prescribed roots, expanded numerically.
AlgebraicPoly poly_from_roots(const std::vector<cdouble>& roots) {
  std::vector<cdouble> c{cdouble(1.0, 0.0)};
  for (const cdouble& r : roots) {
    std::vector<cdouble> next(c.size() + 1, cdouble(0.0, 0.0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = next;
  }
  std::reverse(c.begin(), c.end());  // expansion built high-to-low
  return AlgebraicPoly(std::move(c));
}

}  // namespace

TEST_CASE("roots: linear, quadratic, cyclotomic") {
  const RootResult r1 = find_roots(real_poly({-2.0, 1.0}));
  REQUIRE(r1.roots.size() == 1);
  CHECK(std::abs(r1.roots[0] - cdouble(2.0, 0.0)) < 1e-12);

  const RootResult r2 = find_roots(real_poly({-1.0, 0.0, 1.0}));
  REQUIRE(r2.roots.size() == 2);
  double lo = 1e9, hi = -1e9;
  for (const cdouble& z : r2.roots) {
    lo = std::min(lo, z.real());
    hi = std::max(hi, z.real());
    CHECK(std::abs(z.imag()) < 1e-12);
  }
  CHECK(lo == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));

  const RootResult r3 = find_roots(real_poly({1.0, 1.0, 1.0}));
  for (const cdouble& z : r3.roots) {
    CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(z * z * z - cdouble(1.0, 0.0)) < 1e-10);  // primitive cube roots
  }
  CHECK(r3.max_residual < 1e-12);
}

TEST_CASE("roots: origin multiplicity and residual certificate") {
  // z^3 (z - 2): two coefficients vanish at the bottom.
  const RootResult r = find_roots(real_poly({0.0, 0.0, 0.0, -2.0, 1.0}));
  REQUIRE(r.roots.size() == 4);
  int at_origin = 0;
  for (const cdouble& z : r.roots) {
    if (std::abs(z) < 1e-14) ++at_origin;
  }
  CHECK(at_origin == 3);
  CHECK(r.max_residual < 1e-12);
}

TEST_CASE("roots: high-multiplicity cluster snaps to its centroid") {
  for (int n : {6, 12}) {
    const AlgebraicPoly q = scaled_binomial_poly(n);  // (1+z)^n scaled
    const RootResult r = find_roots(q, 1e-10);
    REQUIRE(static_cast<int>(r.roots.size()) == n);
    for (const cdouble& z : r.roots) {
      CHECK(std::abs(z - cdouble(-1.0, 0.0)) < 1e-6);
    }
  }
}

TEST_CASE("mahler from roots: basic values") {
  const MahlerTriple a = mahler_from_roots(real_poly({-2.0, 1.0}));
  CHECK(a.m == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(a.m_plus == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(a.m_minus == doctest::Approx(1.0).epsilon(1e-8));

  // Lehmer's degree-10 polynomial, frozen from the tightened root product.
  const AlgebraicPoly lehmer =
      real_poly({1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1});
  const MahlerTriple l = mahler_from_roots(lehmer, 1e-10);
  CHECK(l.m == doctest::Approx(1.1762808182599).epsilon(1e-9));
}

TEST_CASE("mahler from roots: cyclotomic products have measure one") {
  for (int n : {1, 2, 3, 5, 8}) {
    std::vector<cdouble> roots;
    for (const Fraction& f : farey_angles(n)) {
      roots.push_back(std::polar(1.0, kTwoPi * f.value()));
    }
    const AlgebraicPoly phi = poly_from_roots(roots);
    const MahlerTriple t = mahler_from_roots(phi, 1e-8);
    CHECK(t.log_m == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
  }
}

TEST_CASE("mahler triple invariants") {
  SmallRng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cdouble> c;
    const int deg = 2 + static_cast<int>(rng.below(9));
    for (int i = 0; i <= deg; ++i) {
      c.push_back(std::polar(rng.uniform(0.05, 1.0), rng.uniform(0.0, kTwoPi)));
    }
    const AlgebraicPoly p{std::move(c)};
    for (const MahlerTriple& t : {mahler_from_roots(p, 1e-9), mahler_from_circle(p, 1e-9)}) {
      CHECK(t.m_plus >= 1.0);
      CHECK(t.m_minus <= 1.0);
      CHECK(t.log_m == doctest::Approx(t.log_m_plus + t.log_m_minus).epsilon(1e-12));
      CHECK(t.err >= 0.0);
    }
  }
}

TEST_CASE("route agreement on random polynomials") {
  SmallRng rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<cdouble> c;
    const int deg = 2 + static_cast<int>(rng.below(11));
    for (int i = 0; i <= deg; ++i) {
      c.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    }
    const AlgebraicPoly p{std::move(c)};
    const MahlerTriple j = mahler_from_roots(p, 1e-9);
    const MahlerTriple q = mahler_from_circle(p, 1e-9);
    const double slack = j.err + q.err;
    CHECK(std::abs(j.log_m - q.log_m) <= slack);
    CHECK(std::abs(j.log_m_plus - q.log_m_plus) <= slack);
    CHECK(std::abs(j.log_m_minus - q.log_m_minus) <= slack);
  }
}

TEST_CASE("multiplicativity through the root product") {
  const AlgebraicPoly p = real_poly({1.0, 2.0, 1.0, 0.5});
  const AlgebraicPoly q = real_poly({-0.3, 1.0, 1.0});
  // Coefficient convolution.
  std::vector<cdouble> prod(p.coefficients().size() + q.coefficients().size() - 1,
                            cdouble(0.0, 0.0));
  for (std::size_t i = 0; i < p.coefficients().size(); ++i) {
    for (std::size_t j = 0; j < q.coefficients().size(); ++j) {
      prod[i + j] += p.coefficients()[i] * q.coefficients()[j];
    }
  }
  const MahlerTriple tp = mahler_from_roots(p);
  const MahlerTriple tq = mahler_from_roots(q);
  const MahlerTriple tpq = mahler_from_roots(AlgebraicPoly{std::move(prod)});
  CHECK(tpq.log_m == doctest::Approx(tp.log_m + tq.log_m).epsilon(1e-9));
}

TEST_CASE("mahler from circle: constants and the two-term evaluator") {
  const MahlerTriple c = mahler_from_circle([](double) { return std::log(2.0); }, {}, 1e-11);
  CHECK(c.m == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(c.m_plus == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(c.m_minus == doctest::Approx(1.0).epsilon(1e-12));

  const MahlerTriple t = mahler_from_circle(
      [](double th) { return std::log(2.0 * std::abs(std::sin(0.5 * th))); }, {0.0}, 1e-9);
  CHECK(std::abs(t.log_m) <= 1e-8);
  const MahlerTriple j = mahler_from_roots(real_poly({1.0, -1.0}));  // 1 - z
  CHECK(std::abs(t.log_m_plus - j.log_m_plus) <= t.err + j.err);
}

TEST_CASE("mahler from circle: scaled binomial cross-check") {
  // All roots on the circle: log m = -log binom(n, n/2) exactly.  Direct
  // coefficient evaluation bottoms out in rounding noise inside the
  // multiplicity-4 dip, so the achievable tolerance is limited; the claimed
  // error must still cover the truth.
  const AlgebraicPoly q4 = scaled_binomial_poly(4);
  const MahlerTriple t = mahler_from_circle(q4, 2e-3);
  CHECK(std::abs(t.log_m - std::log(1.0 / 6.0)) <= t.err);
  const MahlerTriple j = mahler_from_roots(q4, 1e-9);
  CHECK(std::abs(t.log_m_minus - j.log_m_minus) <= t.err + j.err);
  // And an unachievable tolerance reports an honest accuracy failure.
  CHECK_THROWS_AS(mahler_from_circle(q4, 1e-9), accuracy_error);
}

TEST_CASE("accuracy failure carries the best estimate") {
  PanelOptions opt;
  opt.max_panels = 32;
  opt.grade_singularities = false;
  CHECK_THROWS_AS(mahler_from_circle(
                      [](double th) { return std::log(2.0 * std::abs(std::sin(0.5 * th))); },
                      {0.0}, 1e-13, &opt),
                  accuracy_error);
}

TEST_CASE("cyclotomic plan: weights, degree, point values") {
  const CyclotomicPlan p1(1);
  CHECK(p1.log_abs(std::numbers::pi) == doctest::Approx(std::log(2.0)).epsilon(1e-13));

  const CyclotomicPlan p2(2);
  CHECK(p2.log_abs(std::numbers::pi / 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-13));

  const CyclotomicPlan p3(3);
  // 2 pi / 3 is a root of the product; in floating point the factor angle
  // lands within an ulp of pi, so the value is deeply negative rather than
  // -inf.  theta = 0 is representable exactly and does hit -inf.
  CHECK(p3.log_abs(kTwoPi / 3.0) < -30.0);
  CHECK_FALSE(std::isfinite(p3.log_abs(0.0)));

  // Degrees match the Euler-phi sums 1, 2, 4, 6, 10, ...
  CHECK(CyclotomicPlan(1).degree() == 1);
  CHECK(CyclotomicPlan(2).degree() == 2);
  CHECK(CyclotomicPlan(3).degree() == 4);
  CHECK(CyclotomicPlan(4).degree() == 6);
  CHECK(CyclotomicPlan(30).degree() == 278);

  for (int v : p1.mobius()) CHECK(std::abs(v) <= 1);
  CHECK(CyclotomicPlan(10).mobius()[0] == 1);  // mu(1)
}

TEST_CASE("farey fractions") {
  const auto f1 = farey_angles(1);
  REQUIRE(f1.size() == 1);
  CHECK(f1[0].num == 0);
  CHECK(f1[0].den == 1);

  const auto f2 = farey_angles(2);
  REQUIRE(f2.size() == 2);
  CHECK(f2[1].value() == doctest::Approx(0.5));

  const auto f3 = farey_angles(3);
  REQUIRE(f3.size() == 4);
  CHECK(f3[1].value() == doctest::Approx(1.0 / 3.0));
  CHECK(f3[2].value() == doctest::Approx(0.5));
  CHECK(f3[3].value() == doctest::Approx(2.0 / 3.0));

  // Count equals the degree of the cyclotomic product, and the list ascends.
  for (int n : {5, 12, 30}) {
    const auto f = farey_angles(n);
    CHECK(static_cast<std::int64_t>(f.size()) == CyclotomicPlan(n).degree());
    for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i - 1].value() < f[i].value());
  }
  CHECK_THROWS_AS(farey_angles(0), invalid_input);
}

TEST_CASE("cyclotomic log M+ routes agree") {
  const CyclotomicMPlus r1 = cyclotomic_log_mplus(1, 1e-9, 500'000, 3);
  CHECK(r1.quadrature == doctest::Approx(0.32306594726).epsilon(1e-7));
  CHECK(std::abs(r1.quadrature - r1.sampling) <= 5e-4);

  // Substitution theta -> 2 theta: order 2 equals order 1 exactly.
  const CyclotomicMPlus r2 = cyclotomic_log_mplus(2, 1e-9, 500'000, 3);
  CHECK(r2.quadrature == doctest::Approx(r1.quadrature).epsilon(1e-8));

  const CyclotomicMPlus r10 = cyclotomic_log_mplus(10, 1e-7, 2'000'000, 3);
  CHECK(std::abs(r10.quadrature - r10.sampling) <= 1e-3);
}

TEST_CASE("outer test") {
  const OuterResult a = outer_test(real_poly({-2.0, 1.0}));
  CHECK(a.outer);
  CHECK(a.jensen_residual < 1e-8);

  const OuterResult b = outer_test(real_poly({-0.5, 1.0}));
  CHECK_FALSE(b.outer);
  CHECK(b.jensen_residual == doctest::Approx(std::log(2.0)).epsilon(1e-7));

  const OuterResult c = outer_test(real_poly({1.0, 1.0, 1.0}));
  CHECK(c.outer);  // roots on the circle
  CHECK(c.jensen_residual < 1e-7);

  const OuterResult d = outer_test(real_poly({0.0, 1.0}));  // constant coefficient zero
  CHECK_FALSE(d.outer);
  CHECK_FALSE(d.mean_nonzero);
}
