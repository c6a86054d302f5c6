#ifndef SUBLEVEL_CNSEQ_HPP
#define SUBLEVEL_CNSEQ_HPP

#include <cstdint>
#include <vector>

namespace sublevel {

// Checkpointed trace of the bound-constant recurrence
//   C_1 = 1/2,
//   C_k = C_{k-1}^{1-1/k} * [3 sqrt(2)/pi * (k-1)]^{1/k} * k/(k-1),
// iterated in log space with Neumaier compensation.
struct BoundConstantSeries {
  std::vector<std::int64_t> n_checkpoints;  // ascending, last == n_max
  std::vector<double> log_cn;               // log C_n at each checkpoint
  std::vector<double> ratio;                // C_n / n at each checkpoint
  double residue = 0.0;                     // compensation residue (error bound)
};

// log C_n.  n >= 1.
double log_bound_constant(std::int64_t n);

// Single forward pass to n_max recording `checkpoints` geometrically spaced
// checkpoints (ratio 2 when checkpoints == floor(log2 n_max)+1, the CLI
// default).  n_max >= 10, checkpoints >= 2.
BoundConstantSeries bound_constant_series(std::int64_t n_max, int checkpoints);

}  // namespace sublevel

#endif  // SUBLEVEL_CNSEQ_HPP
