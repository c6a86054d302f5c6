#ifndef SUBLEVEL_EXPERIMENTS_HPP
#define SUBLEVEL_EXPERIMENTS_HPP

#include <cstdint>
#include <vector>

#include "sublevel/mahler.hpp"
#include "sublevel/trigpoly.hpp"

namespace sublevel {

// The named example family: all-ones coefficients, and the binomial row
// scaled so the largest coefficient is exactly 1.
AlgebraicPoly all_ones_poly(int n);         // 1 + z + ... + z^n
AlgebraicPoly scaled_binomial_poly(int n);  // (1+z)^n / C(n, floor(n/2))

// Closed form of the sublevel mean of the scaled binomial family:
//   (2/pi) asin(min{1, (1/2) C(n,floor(n/2))^(1/n) u^(1/n)}),
// and the corresponding upper bound (2/pi) asin(min{1, u}) for the all-ones
// family.
double binomial_sublevel_closed_form(int n, double u);
double all_ones_sublevel_bound(int n, double u);

// Randomized probe of the extremal ordering
//   m_minus(all-ones)  <=  m_minus(random R)  <=  m_minus(scaled binomial)
// over (n+1)-term height-1 polynomials.  Flagged violations only enter the
// report body after re-verification at tol/100 through both measure routes.
struct ProbeConfig {
  int n = 4;
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  double tol = 1e-6;  // probe pass; re-verification tightens to tol/100
  bool real_coeffs = false;      // complex unit-phase coefficients otherwise
  bool dense_exponents = false;  // exponents exactly 0..n instead of <= 2n
  bool parallel = true;
};

struct ProbeViolation {
  std::vector<cdouble> coeffs;
  double log_m_minus = 0.0;
  bool left = false;   // below the all-ones endpoint
  bool right = false;  // above the scaled-binomial endpoint
  double recheck_log_m_minus_roots = 0.0;
  double recheck_log_m_minus_circle = 0.0;
};

struct ProbeReport {
  ProbeConfig config;
  std::int64_t completed = 0;
  std::int64_t root_failures = 0;
  double log_m_minus_left = 0.0;   // all-ones endpoint
  double log_m_minus_right = 0.0;  // scaled-binomial endpoint
  double min_log_m_minus = 0.0;
  double median_log_m_minus = 0.0;
  double max_log_m_minus = 0.0;
  std::int64_t flagged = 0;     // raw inequality breaches
  std::int64_t confirmed = 0;   // survived tol/100 re-verification
  std::vector<ProbeViolation> violations;  // confirmed only, capped
  double endpoint_dev_left = 0.0;   // |probe(all-ones) - endpoint|
  double endpoint_dev_right = 0.0;  // |probe(scaled binomial) - endpoint|
};

ProbeReport extremal_probe(const ProbeConfig& config);

// Empirical lower bound for the best constant in the small-value power law:
// sup over sampled (n+1)-term polynomials and grid thresholds of
// J-hat * height^(1/n) * u^(-1/n), reported next to C_n.
struct BestConstantResult {
  int n = 1;
  std::int64_t trials = 0;
  double probe_value = 0.0;
  double reference_constant = 0.0;  // C_n
  double best_u = 0.0;
  std::int64_t best_trial = -1;
};

BestConstantResult best_constant_probe(int n, std::int64_t trials,
                                       std::vector<double> u_grid, std::uint64_t seed,
                                       std::int64_t samples = 200'000,
                                       bool parallel = true);

// Star discrepancy of points in [0,1): sup over prefixes [0,t) of the gap
// between empirical and uniform mass, by the exact sorted-points formula.
double star_discrepancy(std::vector<double> points);

}  // namespace sublevel

#endif  // SUBLEVEL_EXPERIMENTS_HPP
