#ifndef SUBLEVEL_TRIGPOLY_HPP
#define SUBLEVEL_TRIGPOLY_HPP

#include <complex>
#include <vector>

#include "sublevel/common.hpp"

namespace sublevel {

using cdouble = std::complex<double>;

// One exponential term a * e^{i omega x}.
struct Term {
  double omega = 0.0;
  cdouble coeff{0.0, 0.0};
};

// Finite sum of complex exponentials with real frequencies.  Terms are kept
// sorted by strictly increasing frequency; construction merges terms whose
// frequencies compare exactly equal and drops zero coefficients.  An empty
// term list is the zero function; analysis operations reject it.
class TrigPoly {
 public:
  TrigPoly() = default;
  explicit TrigPoly(std::vector<Term> terms);

  // Terms with frequency k for coeffs[k] != 0.
  static TrigPoly from_integer_coeffs(const std::vector<cdouble>& coeffs);

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  // Direct summation; throws invalid_input on the zero polynomial.
  cdouble operator()(double x) const;

  // Term-wise (i omega)^order; frequency-zero terms vanish.  May return the
  // zero polynomial (constant input).
  TrigPoly derivative(int order = 1) const;

  double height() const;          // max |coeff|
  double bandwidth() const;       // sup spectrum - inf spectrum
  double coeff_abs_sum() const;   // sum |coeff|  (upper bound for sup |f|)

  TrigPoly modulated(double omega) const;  // e^{i omega x} * f(x)
  TrigPoly dilated(double a) const;        // f(a x), a != 0

 private:
  std::vector<Term> terms_;
};

// Result of mapping f onto spectrum [0,1] with bandwidth 1:
//   h(x) = e^{i (modulation/scale) x} * f(x/scale)
// so f(y) = e^{-i modulation y} * h(scale * y).
struct Normalized {
  TrigPoly poly;
  double modulation = 0.0;  // -omega_min of f
  double scale = 1.0;       // b(f)
};

Normalized normalize(const TrigPoly& f);

// Complex-coefficient polynomial in one variable, coefficient index =
// exponent.  High-order zero coefficients are trimmed on construction; the
// identically zero polynomial is rejected.
class AlgebraicPoly {
 public:
  explicit AlgebraicPoly(std::vector<cdouble> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cdouble>& coefficients() const { return coeffs_; }
  cdouble leading() const { return coeffs_.back(); }
  cdouble constant() const { return coeffs_.front(); }

  cdouble operator()(cdouble z) const;  // Horner
  AlgebraicPoly derivative() const;     // degree >= 1 required
  double log_abs_on_circle(double theta) const;  // log|p(e^{i theta})|

  // Composition with e^{ix}: term k becomes frequency k.
  TrigPoly on_circle() const;

 private:
  std::vector<cdouble> coeffs_;
};

}  // namespace sublevel

#endif  // SUBLEVEL_TRIGPOLY_HPP
