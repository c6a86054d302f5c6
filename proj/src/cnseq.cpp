#include "sublevel/cnseq.hpp"

#include <algorithm>
#include <cmath>

#include "sublevel/common.hpp"

namespace sublevel {

namespace {

// The recurrence in the variable r_k := log(C_k / k) collapses to
//   r_k = r_{k-1} + (a - r_{k-1}) / k,   a = log(3 sqrt(2)/pi),
// which keeps the iterate O(1) and the increments O(1/k^2), so the
// compensated sum holds the 9th significant digit across 2e8 steps.
struct RatioIterator {
  NeumaierSum r;
  const double a = std::log(kSmallSetCoeff);

  RatioIterator() { r.add(std::log(0.5)); }  // r_1 = log(C_1/1)

  void step(std::int64_t k) { r.add((a - r.value()) / static_cast<double>(k)); }

  double log_ratio() const { return r.value(); }
  double log_cn(std::int64_t k) const {
    return r.value() + std::log(static_cast<double>(k));
  }
};

}  // namespace

double log_bound_constant(std::int64_t n) {
  if (n < 1) throw invalid_input("log_bound_constant: n must be >= 1");
  RatioIterator it;
  for (std::int64_t k = 2; k <= n; ++k) it.step(k);
  return it.log_cn(n);
}

BoundConstantSeries bound_constant_series(std::int64_t n_max, int checkpoints) {
  if (n_max < 10) throw invalid_input("bound_constant_series: n_max must be >= 10");
  if (checkpoints < 2) throw invalid_input("bound_constant_series: need >= 2 checkpoints");

  // Geometric checkpoint grid from 1 to n_max, deduplicated.
  std::vector<std::int64_t> marks;
  const double ratio = std::pow(static_cast<double>(n_max),
                                1.0 / static_cast<double>(checkpoints - 1));
  double x = 1.0;
  for (int i = 0; i < checkpoints; ++i) {
    auto m = static_cast<std::int64_t>(std::llround(x));
    m = std::clamp<std::int64_t>(m, 1, n_max);
    if (marks.empty() || m > marks.back()) marks.push_back(m);
    x *= ratio;
  }
  if (marks.back() != n_max) marks.push_back(n_max);

  BoundConstantSeries out;
  RatioIterator it;
  std::size_t next = 0;
  if (marks[0] == 1) {
    out.n_checkpoints.push_back(1);
    out.log_cn.push_back(it.log_cn(1));
    out.ratio.push_back(std::exp(it.log_ratio()));
    ++next;
  }
  for (std::int64_t k = 2; k <= n_max; ++k) {
    it.step(k);
    if (next < marks.size() && marks[next] == k) {
      out.n_checkpoints.push_back(k);
      out.log_cn.push_back(it.log_cn(k));
      out.ratio.push_back(std::exp(it.log_ratio()));
      ++next;
    }
  }
  out.residue = it.r.residue();
  return out;
}

}  // namespace sublevel
