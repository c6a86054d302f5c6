#include "sublevel/trigpoly.hpp"

#include <algorithm>
#include <cmath>

namespace sublevel {

namespace {

// (i*omega)^order by repeated multiplication; order is small.
cdouble i_omega_pow(double omega, int order) {
  const cdouble base(0.0, omega);
  cdouble r(1.0, 0.0);
  for (int j = 0; j < order; ++j) r *= base;
  return r;
}

}  // namespace

TrigPoly::TrigPoly(std::vector<Term> terms) : terms_(std::move(terms)) {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const Term& a, const Term& b) { return a.omega < b.omega; });
  // Merge exactly equal frequencies, then drop zero coefficients.  Merging is
  // exact on purpose: tolerance-based merging would silently change the
  // spectrum of programmatic inputs.
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (!merged.empty() && merged.back().omega == t.omega) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  terms_.clear();
  for (const Term& t : merged) {
    if (t.coeff != cdouble(0.0, 0.0)) terms_.push_back(t);
  }
}

TrigPoly TrigPoly::from_integer_coeffs(const std::vector<cdouble>& coeffs) {
  std::vector<Term> terms;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != cdouble(0.0, 0.0)) {
      terms.push_back({static_cast<double>(k), coeffs[k]});
    }
  }
  return TrigPoly(std::move(terms));
}

cdouble TrigPoly::operator()(double x) const {
  if (terms_.empty()) throw invalid_input("evaluate: zero polynomial");
  cdouble acc(0.0, 0.0);
  for (const Term& t : terms_) {
    acc += t.coeff * std::polar(1.0, t.omega * x);
  }
  return acc;
}

TrigPoly TrigPoly::derivative(int order) const {
  if (order < 1) throw invalid_input("derivative: order must be >= 1");
  std::vector<Term> terms;
  terms.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (t.omega == 0.0) continue;
    terms.push_back({t.omega, t.coeff * i_omega_pow(t.omega, order)});
  }
  return TrigPoly(std::move(terms));
}

double TrigPoly::height() const {
  if (terms_.empty()) throw invalid_input("height: zero polynomial");
  double h = 0.0;
  for (const Term& t : terms_) h = std::max(h, std::abs(t.coeff));
  return h;
}

double TrigPoly::bandwidth() const {
  if (terms_.empty()) throw invalid_input("bandwidth: zero polynomial");
  return terms_.back().omega - terms_.front().omega;
}

double TrigPoly::coeff_abs_sum() const {
  double s = 0.0;
  for (const Term& t : terms_) s += std::abs(t.coeff);
  return s;
}

TrigPoly TrigPoly::modulated(double omega) const {
  std::vector<Term> terms = terms_;
  for (Term& t : terms) t.omega += omega;
  return TrigPoly(std::move(terms));
}

TrigPoly TrigPoly::dilated(double a) const {
  if (a == 0.0) throw invalid_input("dilated: zero dilation");
  std::vector<Term> terms = terms_;
  for (Term& t : terms) t.omega *= a;
  return TrigPoly(std::move(terms));
}

Normalized normalize(const TrigPoly& f) {
  if (f.is_zero()) throw invalid_input("normalize: zero polynomial");
  const double b = f.bandwidth();
  if (b == 0.0) throw invalid_input("normalize: constant polynomial (bandwidth 0)");
  const double omega_min = f.terms().front().omega;
  std::vector<Term> terms = f.terms();
  for (Term& t : terms) t.omega = (t.omega - omega_min) / b;
  Normalized out;
  out.poly = TrigPoly(std::move(terms));
  out.modulation = -omega_min;
  out.scale = b;
  return out;
}

AlgebraicPoly::AlgebraicPoly(std::vector<cdouble> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == cdouble(0.0, 0.0)) coeffs_.pop_back();
  if (coeffs_.empty()) throw invalid_input("AlgebraicPoly: zero polynomial");
}

cdouble AlgebraicPoly::operator()(cdouble z) const {
  cdouble acc(0.0, 0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * z + *it;
  }
  return acc;
}

AlgebraicPoly AlgebraicPoly::derivative() const {
  if (degree() < 1) throw invalid_input("AlgebraicPoly::derivative: constant");
  std::vector<cdouble> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    d[k - 1] = coeffs_[k] * static_cast<double>(k);
  }
  return AlgebraicPoly(std::move(d));
}

double AlgebraicPoly::log_abs_on_circle(double theta) const {
  const cdouble v = (*this)(std::polar(1.0, theta));
  return std::log(std::max(std::abs(v), 1e-300));
}

TrigPoly AlgebraicPoly::on_circle() const {
  return TrigPoly::from_integer_coeffs(coeffs_);
}

}  // namespace sublevel
