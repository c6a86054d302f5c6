#ifndef SUBLEVEL_MAHLER_HPP
#define SUBLEVEL_MAHLER_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sublevel/quadrature.hpp"
#include "sublevel/trigpoly.hpp"

namespace sublevel {

// ---------------------------------------------------------------------------
// Root finding: simultaneous (Durand-Kerner) refinement from a perturbed
// circle, with cluster detection for multiple roots.  The certificate is the
// largest |p(root)| relative to the coefficient magnitude scale.

struct RootResult {
  std::vector<cdouble> roots;  // exactly degree(p) entries
  // max over roots of |p(root)| / (sum_j |c_j| |root|^j): residual relative
  // to the coefficient-magnitude scale at the root.
  double max_residual = 0.0;
  int iterations = 0;
};

RootResult find_roots(const AlgebraicPoly& p, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Mahler measures on the circle.  m = m_plus * m_minus holds on the log
// scale by construction; m_plus >= 1 and m_minus <= 1 exactly.

enum class MahlerMethod { jensen, quadrature, sampling };

struct MahlerTriple {
  double m = 0.0;
  double m_plus = 1.0;
  double m_minus = 1.0;
  double log_m = 0.0;
  double log_m_plus = 0.0;
  double log_m_minus = 0.0;
  MahlerMethod method = MahlerMethod::jensen;
  double err = 0.0;  // absolute error estimate on the log scale
};

std::string to_string(MahlerMethod m);

// Root-product route: log m from |lead| * prod max(1,|root|); the log-/log+
// split integrates the root-factored magnitude with the root angles as
// singular hints; cross-checked against the constant-coefficient form of
// Jensen's identity when p(0) != 0.
MahlerTriple mahler_from_roots(const AlgebraicPoly& p, double tol = 1e-10);

// Quadrature route over a caller-supplied log-magnitude evaluator with known
// singular angles.  Throws accuracy_error (carrying the best log m estimate)
// when the panel budget is exhausted before reaching tol.
MahlerTriple mahler_from_circle(const std::function<double(double)>& log_abs,
                                std::vector<double> singular_angles, double tol,
                                const PanelOptions* options = nullptr);

// Coefficient route for a polynomial: Horner evaluation, with near-zero
// angles located by a magnitude scan (no root information crosses over).
MahlerTriple mahler_from_circle(const AlgebraicPoly& p, double tol);

// ---------------------------------------------------------------------------
// Product of the first N cyclotomic polynomials, evaluated on the circle
// through the factorization  prod_{k<=N} Phi_k = prod_{d<=N} (z^d - 1)^{w_d},
// w_d = sum of mu over multiples (a Mertens value); coefficients are never
// expanded.

class CyclotomicPlan {
 public:
  explicit CyclotomicPlan(int n_max);

  int n_max() const { return n_max_; }
  std::int64_t degree() const { return degree_; }
  const std::vector<int>& mobius() const { return mobius_; }            // mu(1..N)
  const std::vector<std::int64_t>& weights() const { return weights_; }  // w_1..w_N

  // log|Phi-product(e^{i theta})| = sum_d w_d log|2 sin(d theta / 2)|.
  // Exact zeros of a factor give a non-finite value; quadrature panels never
  // sample them (Farey angles are panel corners).
  double log_abs(double theta) const;

 private:
  int n_max_;
  std::int64_t degree_ = 0;
  std::vector<int> mobius_;
  std::vector<std::int64_t> weights_;
};

std::function<double(double)> cyclotomic_log_evaluator(const CyclotomicPlan& plan);

// Reduced fractions a/q, q <= n, in [0,1), ascending: the root angles of the
// cyclotomic product divided by 2 pi.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

std::vector<Fraction> farey_angles(int n);

// log M+ of the cyclotomic product by two routes: graded quadrature of the
// positive part (panels split at the Farey angles) and the stratified
// period-mean of -log-minus (valid because log M = 0 for these products).
struct CyclotomicMPlus {
  double quadrature = 0.0;
  double sampling = 0.0;
  double quadrature_err = 0.0;
  double sampling_std_error = 0.0;
  std::size_t panels = 0;
};

CyclotomicMPlus cyclotomic_log_mplus(int n, double tol, std::int64_t samples = 4'000'000,
                                     std::uint64_t seed = 0, bool parallel = true);

// ---------------------------------------------------------------------------
// Outer test: no roots in the open unit disk, plus the Jensen residual
// |circle mean of log|p|  -  log|constant coefficient||, which vanishes
// exactly for outer polynomials.

struct OuterResult {
  bool outer = false;
  bool mean_nonzero = false;  // constant coefficient != 0
  double min_root_modulus = 0.0;
  double jensen_residual = 0.0;
};

OuterResult outer_test(const AlgebraicPoly& p, double tol = 1e-9);

}  // namespace sublevel

#endif  // SUBLEVEL_MAHLER_HPP
