#ifndef SUBLEVEL_QUADRATURE_HPP
#define SUBLEVEL_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace sublevel {

// Adaptive panel quadrature of a log-magnitude function over [0, 2pi),
// splitting the positive and negative parts.  Panels use open Gauss rules
// (7 and 15 points), so endpoints -- where exact circle zeros live -- are
// never sampled.  Known singular angles become panel corners with geometric
// grading down to `singular_eps`; the skipped sliver next to each
// singularity is charged to the error estimate.
struct PanelOptions {
  double tol = 1e-9;               // absolute tolerance on each period mean
  std::size_t max_panels = 400000;
  int initial_per_segment = 8;     // uniform panels between singular corners
  bool grade_singularities = true;
  double singular_eps = 1e-12;     // innermost graded panel boundary
  bool positive_only = false;      // converge on the log+ component alone
  bool parallel = true;
};

struct CircleLogIntegral {
  double pos = 0.0;   // (1/2pi) * integral of max(0, f)
  double neg = 0.0;   // (1/2pi) * integral of min(0, f)
  double err = 0.0;   // absolute error estimate on the period-mean scale
  std::size_t panels = 0;
  bool converged = false;
};

CircleLogIntegral integrate_circle_log(const std::function<double(double)>& log_abs,
                                       std::vector<double> singular_angles,
                                       const PanelOptions& opt);

}  // namespace sublevel

#endif  // SUBLEVEL_QUADRATURE_HPP
