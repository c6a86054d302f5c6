#ifndef SUBLEVEL_MEANMEASURE_HPP
#define SUBLEVEL_MEANMEASURE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "sublevel/trigpoly.hpp"

namespace sublevel {

// Sampling plan shared by all mean-measure estimators.  The window is the
// half-width L of [-L, L]; 0 selects the default 1000 * (2 pi / b(f)).  When
// the frequency ratios are rational the exact period is detected and one
// period is sampled instead, which removes the window truncation error
// entirely (this covers every integer-frequency object).
struct SampleSpec {
  double window = 0.0;
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  bool parallel = true;
};

struct SublevelCurve {
  std::vector<double> thresholds;  // ascending, positive
  std::vector<double> estimates;   // in [0,1], nondecreasing
  std::vector<double> std_errors;  // binomial standard errors
  double window = 0.0;             // half-width actually sampled
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  bool periodic = false;           // exact-period sampling was used
};

// Fraction of stratified sample points with |f(x)| < u, one common sample
// set for all thresholds (so the curve is exactly monotone).
SublevelCurve sublevel_curve(const TrigPoly& f, std::vector<double> thresholds,
                             const SampleSpec& spec);

// Mean measure of {x : |f(x)| < u and |(e^{i omega x} f)^{(j)}(x)| < v^j,
// j = 1..order_max}, on the same sample set as sublevel_curve for equal spec.
struct ConstrainedSublevel {
  double value = 0.0;
  double std_error = 0.0;
  double omega = 0.0;
  int order_max = 1;
  double u = 0.0, v = 0.0;
};

ConstrainedSublevel constrained_sublevel(const TrigPoly& f, double omega, int order_max,
                                         double u, double v, const SampleSpec& spec);

// Grid minimization of  3 sqrt(2)/pi * b(f) * k / v * u^{1/k}  +  Xi-hat.
// An upper estimate of the true infimum (the grid is a subset).
struct BoundSearchGrids {
  std::vector<double> omegas{0.0};
  int order_max = 4;
  std::vector<double> v_grid;  // empty -> log-spaced 61 points on [1e-3, 1e3]
};

struct BoundSearchResult {
  double value = 0.0;          // min over the grid, clamped to [0, inf)
  double analytic_term = 0.0;  // at the argmin
  double constrained_value = 0.0;
  double constrained_std_error = 0.0;
  double omega = 0.0;
  int order = 1;
  double v = 0.0;
};

BoundSearchResult sublevel_upper_bound(const TrigPoly& f, double u,
                                       const BoundSearchGrids& grids,
                                       const SampleSpec& spec);

// C_n * height^{-1/n} * u^{1/n}; values above 1 are vacuous but returned
// unclamped.
double small_value_bound(int n, double height, double u);

// Sample mean of |min(0, log|f(x)|)|^p.
double neg_log_moment(const TrigPoly& f, double p, const SampleSpec& spec);

// Randomized check of the quadrant interval bound
//   b - a <= 2 sqrt(2) max|phi|([a,b]) / min|phi'|([a,b])
// on random trigonometric polynomials whose sampled derivative image lies in
// one closed quadrant.  `trials` is the number of accepted (filtered) cases.
struct IntervalBoundReport {
  std::int64_t accepted = 0;
  std::int64_t violations = 0;
  std::int64_t degenerate_skips = 0;  // min|phi'| below resolution
  std::int64_t examined = 0;          // candidates drawn in total
};

IntervalBoundReport interval_bound_trials(std::uint64_t seed, std::int64_t trials);

// Exact period when all frequency ratios are rational (continued-fraction
// rationalization, denominator cap 1e6); empty otherwise.
std::optional<double> detect_period(const TrigPoly& f);

double default_window(const TrigPoly& f);

// Doubling-stability surrogate for the L -> infinity limit: the difference
// |J-hat at window L - J-hat at window 2L| for one threshold.  Meaningful
// for aperiodic inputs; periodic inputs sample one exact period regardless.
double window_stability(const TrigPoly& f, double u, const SampleSpec& spec);

}  // namespace sublevel

#endif  // SUBLEVEL_MEANMEASURE_HPP
