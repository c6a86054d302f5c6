#ifndef SUBLEVEL_COMMON_HPP
#define SUBLEVEL_COMMON_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sublevel {

// Coefficient of the analytic small-set bound: 3*sqrt(2)/pi.
inline constexpr double kSmallSetCoeff =
    3.0 * std::numbers::sqrt2_v<double> / std::numbers::pi_v<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// Rejected inputs (zero polynomial, bad grids, out-of-range parameters).
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numeric routine ran out of budget before meeting its tolerance.
// Carries the best estimate reached and its estimated error.
class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& what, double best, double err)
      : std::runtime_error(what), best_estimate(best), error_estimate(err) {}
  double best_estimate;
  double error_estimate;
};

// ---------------------------------------------------------------------------
// Thread cap.  Parallel regions always request exactly this many threads so
// that run-to-run behaviour does not depend on OMP_NUM_THREADS spelling.
// Results are independent of the cap by construction (fixed-shape
// reductions); the cap only controls speed.

inline std::atomic<int>& thread_cap_ref() {
  static std::atomic<int> cap{[] {
    if (const char* env = std::getenv("SUBLEVEL_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
  }()};
  return cap;
}

inline int thread_cap() { return thread_cap_ref().load(); }
inline void set_thread_cap(int n) { thread_cap_ref().store(n < 1 ? 1 : n); }

template <class F>
void parallel_for(std::int64_t n, F&& body) {
#ifdef _OPENMP
  if (thread_cap() > 1) {
#pragma omp parallel for schedule(static) num_threads(thread_cap())
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#endif
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

// ---------------------------------------------------------------------------
// Deterministic reductions.

// Fixed-shape pairwise tree sum; result does not depend on thread count
// because it is only ever applied to a fully materialized array.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

// Sum of f(0..n-1): serial in-order partial sums over fixed-width blocks,
// then a pairwise tree over the block sums.  The reduction shape is a
// function of n alone, so serial and parallel runs agree bit for bit.
template <class F>
double blocked_sum(std::int64_t n, F&& f, bool parallel = true) {
  constexpr std::int64_t kBlock = 4096;
  if (n <= 0) return 0.0;
  const std::int64_t nb = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(static_cast<std::size_t>(nb));
  auto one_block = [&](std::int64_t b) {
    double s = 0.0;
    const std::int64_t end = std::min(n, (b + 1) * kBlock);
    for (std::int64_t i = b * kBlock; i < end; ++i) s += f(i);
    partial[static_cast<std::size_t>(b)] = s;
  };
  if (parallel) {
    parallel_for(nb, one_block);
  } else {
    for (std::int64_t b = 0; b < nb; ++b) one_block(b);
  }
  return pairwise_sum(partial);
}

// Neumaier-compensated accumulator for long recurrences.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
  double residue() const { return std::abs(comp); }
};

// ---------------------------------------------------------------------------
// Counter-based random bits (splitmix64 finalizer).  stream(seed, i) is a
// pure function, so any sample or trial can be computed independently of
// every other one; parallel order cannot affect the draws.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix_bits(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t stream(std::uint64_t seed, std::uint64_t i) {
  return mix_bits(seed + (i + 1) * kGolden);
}

// Uniform double in [0,1) from 53 random bits.
inline constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Sequential generator for trials that need several draws.
struct SmallRng {
  std::uint64_t state;
  explicit SmallRng(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    state += kGolden;
    return mix_bits(state);
  }
  double uniform() { return to_unit(next()); }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  // Integer in [0, n) by 128-bit multiply-shift.
  std::int64_t below(std::int64_t n) {
    return static_cast<std::int64_t>(
        (static_cast<unsigned __int128>(next()) *
         static_cast<unsigned __int128>(n)) >> 64);
  }
};

}  // namespace sublevel

#endif  // SUBLEVEL_COMMON_HPP
