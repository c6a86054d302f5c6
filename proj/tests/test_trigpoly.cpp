#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "sublevel/trigpoly.hpp"

using namespace sublevel;

namespace {

TrigPoly mk(std::vector<Term> terms) { return TrigPoly(std::move(terms)); }

TrigPoly two_term() {  // 1 - e^{ix}
  return mk({{0.0, {1.0, 0.0}}, {1.0, {-1.0, 0.0}}});
}

}  // namespace

TEST_CASE("evaluate: constant, resonance and half-angle identity") {
  const TrigPoly c = mk({{0.0, {1.0, 0.0}}});
  CHECK(c(17.3) == cdouble(1.0, 0.0));

  const TrigPoly f = two_term();
  const cdouble at_pi = f(std::numbers::pi);
  CHECK(at_pi.real() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(at_pi.imag() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

  // |1 - e^{ix}| = 2|sin(x/2)|, checked by direct complex arithmetic.
  const double x = std::numbers::pi / 3.0;
  const cdouble direct = cdouble(1.0, 0.0) - std::exp(cdouble(0.0, x));
  CHECK(std::abs(f(x)) == doctest::Approx(std::abs(direct)).epsilon(1e-14));
  CHECK(std::abs(f(x)) == doctest::Approx(2.0 * std::abs(std::sin(x / 2.0))).epsilon(1e-14));
}

TEST_CASE("evaluate rejects the zero polynomial") {
  const TrigPoly z;
  CHECK(z.is_zero());
  CHECK_THROWS_AS(z(0.0), invalid_input);
}

TEST_CASE("derivative: term map, zero removal, constant kill") {
  const TrigPoly f = two_term();
  const TrigPoly d = f.derivative(1);
  REQUIRE(d.term_count() == 1);
  CHECK(d.terms()[0].omega == 1.0);
  CHECK(d.terms()[0].coeff.real() == doctest::Approx(0.0).scale(1.0));
  CHECK(d.terms()[0].coeff.imag() == doctest::Approx(-1.0));

  const TrigPoly g = mk({{2.0, {1.0, 0.0}}});
  const TrigPoly g2 = g.derivative(2);
  REQUIRE(g2.term_count() == 1);
  CHECK(g2.terms()[0].coeff.real() == doctest::Approx(-4.0));
  CHECK(g2.terms()[0].coeff.imag() == doctest::Approx(0.0).scale(1.0));

  const TrigPoly c = mk({{0.0, {3.0, 0.0}}});
  CHECK(c.derivative(1).is_zero());
}

TEST_CASE("derivative agrees with central finite differences") {
  SmallRng rng(11);
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Term> terms;
    const int nterms = 2 + static_cast<int>(rng.below(7));  // up to 8
    for (int t = 0; t < nterms; ++t) {
      terms.push_back({rng.uniform(-4.0, 4.0),
                       std::polar(rng.uniform(0.1, 2.0), rng.uniform(0.0, kTwoPi))});
    }
    const TrigPoly f(terms);
    if (f.term_count() < 2) continue;
    const TrigPoly d = f.derivative(1);
    if (d.is_zero()) continue;
    double scale = 0.0;
    for (const Term& t : f.terms()) scale += std::abs(t.omega * t.coeff);
    for (int k = 0; k < 5; ++k) {
      const double x = rng.uniform(-10.0, 10.0);
      const cdouble fd = (f(x + h) - f(x - h)) / (2.0 * h);
      const cdouble exact = d(x);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(std::abs(exact), 1e-3 * scale));
    }
  }
}

TEST_CASE("height and bandwidth") {
  CHECK(two_term().height() == doctest::Approx(1.0));
  const TrigPoly f = mk({{0.0, {0.5, 0.0}}, {1.0, {2.0, 0.0}}, {3.0, {-1.0, 0.0}}});
  CHECK(f.height() == doctest::Approx(2.0));
  // Scaled binomial row (0.5, 1, 0.5) on frequencies 0,1,2.
  const TrigPoly q2 = mk({{0.0, {0.5, 0.0}}, {1.0, {1.0, 0.0}}, {2.0, {0.5, 0.0}}});
  CHECK(q2.height() == doctest::Approx(1.0));

  CHECK(mk({{0.0, {1.0, 0.0}}}).bandwidth() == 0.0);
  CHECK(two_term().bandwidth() == doctest::Approx(1.0));
  CHECK(mk({{-3.0, {1.0, 0.0}}, {5.0, {1.0, 0.0}}}).bandwidth() == doctest::Approx(8.0));
}

TEST_CASE("construction merges exact duplicates and drops zeros") {
  const TrigPoly f = mk({{1.0, {1.0, 0.0}}, {1.0, {-1.0, 0.0}}, {2.0, {0.0, 0.0}}});
  CHECK(f.is_zero());
  const TrigPoly g = mk({{2.0, {1.0, 0.0}}, {1.0, {1.0, 0.0}}});
  CHECK(g.terms()[0].omega == 1.0);  // sorted ascending
  CHECK(g.terms()[1].omega == 2.0);
}

TEST_CASE("normalize maps the spectrum onto [0,1]") {
  const Normalized n1 = normalize(two_term());
  CHECK(n1.modulation == 0.0);
  CHECK(n1.scale == 1.0);
  CHECK(n1.poly.terms()[0].omega == 0.0);
  CHECK(n1.poly.terms()[1].omega == 1.0);

  const TrigPoly f = mk({{2.0, {1.0, 0.0}}, {4.0, {1.0, 0.0}}});
  const Normalized n2 = normalize(f);
  CHECK(n2.scale == doctest::Approx(2.0));
  CHECK(n2.modulation == doctest::Approx(-2.0));
  CHECK(n2.poly.terms()[0].omega == doctest::Approx(0.0).scale(1.0));
  CHECK(n2.poly.terms()[1].omega == doctest::Approx(1.0));

  const TrigPoly g = mk({{-1.0, {1.0, 0.0}}, {1.0, {1.0, 0.0}}});
  const Normalized n3 = normalize(g);
  CHECK(n3.scale == doctest::Approx(2.0));
  CHECK(n3.poly.terms()[0].omega == doctest::Approx(0.0).scale(1.0));
  CHECK(n3.poly.terms()[1].omega == doctest::Approx(1.0));

  CHECK_THROWS_AS(normalize(mk({{0.0, {1.0, 0.0}}})), invalid_input);
}

TEST_CASE("normalize preserves height and pointwise magnitude") {
  SmallRng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Term> terms;
    for (int t = 0; t < 3; ++t) {
      terms.push_back({rng.uniform(-4.0, 4.0),
                       std::polar(rng.uniform(0.1, 2.0), rng.uniform(0.0, kTwoPi))});
    }
    const TrigPoly f(terms);
    if (f.term_count() < 2 || f.bandwidth() == 0.0) continue;
    const Normalized n = normalize(f);
    CHECK(n.poly.height() == doctest::Approx(f.height()).epsilon(1e-14));
    CHECK(n.poly.bandwidth() == doctest::Approx(1.0).epsilon(1e-14));
    // h(x) = e^{i (modulation/scale) x} f(x/scale): same magnitude pointwise.
    for (int k = 0; k < 20; ++k) {
      const double x = rng.uniform(-20.0, 20.0);
      CHECK(std::abs(n.poly(x)) ==
            doctest::Approx(std::abs(f(x / n.scale))).epsilon(1e-11));
    }
  }
}

TEST_CASE("algebraic polynomial basics") {
  CHECK_THROWS_AS(AlgebraicPoly({{0.0, 0.0}, {0.0, 0.0}}), invalid_input);
  const AlgebraicPoly p({{1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}});
  CHECK(p.degree() == 2);  // trailing zero trimmed
  CHECK(std::abs(p(cdouble(0.0, 1.0))) == doctest::Approx(0.0).scale(1.0));  // 1 + i^2

  const AlgebraicPoly q({{-2.0, 0.0}, {1.0, 0.0}});
  CHECK(q(cdouble(2.0, 0.0)) == cdouble(0.0, 0.0));
  CHECK(q.derivative().degree() == 0);
  CHECK(q.derivative().leading() == cdouble(1.0, 0.0));

  const TrigPoly t = p.on_circle();
  CHECK(t.term_count() == 2);
  CHECK(t.terms()[1].omega == 2.0);
}
