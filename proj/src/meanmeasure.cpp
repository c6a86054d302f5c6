#include "sublevel/meanmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sublevel/cnseq.hpp"

namespace sublevel {

namespace {

// Continued-fraction rationalization of x with bounded denominator.
std::optional<std::pair<std::int64_t, std::int64_t>> rationalize(double x,
                                                                 std::int64_t max_den,
                                                                 double tol) {
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(r);
    if (fl > 9.2e17 || fl < -9.2e17) return std::nullopt;
    const auto a = static_cast<std::int64_t>(fl);
    const std::int64_t p2 = a * p1 + p0;
    const std::int64_t q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) {
      return std::make_pair(p1, q1);
    }
    const double frac = r - fl;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  if (q1 >= 1 &&
      std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) {
    return std::make_pair(p1, q1);
  }
  return std::nullopt;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = std::abs(a);
  b = std::abs(b);
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

// Sampling domain: [origin, origin + length), `samples` equal strata with
// one uniform draw per stratum.  x(i) is a pure function of (seed, i).
struct Domain {
  double origin = 0.0;
  double length = 0.0;
  double half_window = 0.0;  // reported window
  bool periodic = false;

  double point(std::uint64_t seed, std::int64_t i, std::int64_t samples) const {
    const double u = to_unit(stream(seed, static_cast<std::uint64_t>(i)));
    return origin + (static_cast<double>(i) + u) * (length / static_cast<double>(samples));
  }
};

Domain make_domain(const TrigPoly& f, const SampleSpec& spec) {
  if (spec.window < 0.0) throw invalid_input("sampling window must be nonnegative");
  Domain d;
  if (auto period = detect_period(f)) {
    d.origin = 0.0;
    d.length = *period;
    d.half_window = *period / 2.0;
    d.periodic = true;
    return d;
  }
  const double half = spec.window > 0.0 ? spec.window : default_window(f);
  d.origin = -half;
  d.length = 2.0 * half;
  d.half_window = half;
  d.periodic = false;
  return d;
}

void require_nonzero(const TrigPoly& f, const char* who) {
  if (f.is_zero()) throw invalid_input(std::string(who) + ": zero polynomial");
}

// Integer event counts per threshold over the common sample set.  Integer
// partial sums commute, so the result cannot depend on the thread count.
std::vector<std::int64_t> sublevel_counts(const TrigPoly& f,
                                          const std::vector<double>& thresholds,
                                          const Domain& d, const SampleSpec& spec) {
  const std::size_t nt = thresholds.size();
  std::vector<std::int64_t> counts(nt, 0);
  constexpr std::int64_t kBlock = 8192;
  const std::int64_t nb = (spec.samples + kBlock - 1) / kBlock;
  std::vector<std::int64_t> partial(static_cast<std::size_t>(nb) * nt, 0);
  auto body = [&](std::int64_t b) {
    std::int64_t* local = partial.data() + static_cast<std::size_t>(b) * nt;
    const std::int64_t end = std::min(spec.samples, (b + 1) * kBlock);
    for (std::int64_t i = b * kBlock; i < end; ++i) {
      const double m = std::abs(f(d.point(spec.seed, i, spec.samples)));
      // thresholds ascend: count the suffix m < u.
      for (std::size_t t = nt; t-- > 0;) {
        if (m < thresholds[t]) {
          ++local[t];
        } else {
          break;
        }
      }
    }
  };
  if (spec.parallel) {
    parallel_for(nb, body);
  } else {
    for (std::int64_t b = 0; b < nb; ++b) body(b);
  }
  for (std::int64_t b = 0; b < nb; ++b) {
    for (std::size_t t = 0; t < nt; ++t) {
      counts[t] += partial[static_cast<std::size_t>(b) * nt + t];
    }
  }
  return counts;
}

double binomial_std_error(double p, std::int64_t n) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

}  // namespace

std::optional<double> detect_period(const TrigPoly& f) {
  if (f.is_zero()) return std::nullopt;
  double base = 0.0;
  for (const Term& t : f.terms()) {
    const double a = std::abs(t.omega);
    if (a > 0.0 && (base == 0.0 || a < base)) base = a;
  }
  if (base == 0.0) return kTwoPi;  // constant: any window works; picked 2 pi
  std::vector<std::pair<std::int64_t, std::int64_t>> fracs;
  for (const Term& t : f.terms()) {
    if (t.omega == 0.0) continue;
    const double r = t.omega / base;
    // Denominator cap 1e4: small enough that irrational ratios (whose
    // convergents need q ~ 1/sqrt(tol)) are correctly left aperiodic.
    auto pq = rationalize(r, 10'000, 1e-12 * std::max(1.0, std::abs(r)));
    if (!pq) return std::nullopt;
    fracs.push_back(*pq);
  }
  std::int64_t den_lcm = 1;
  for (auto [p, q] : fracs) {
    (void)p;
    const std::int64_t g = gcd64(den_lcm, q);
    if (den_lcm / g > 1'000'000'000 / q) return std::nullopt;  // overflow cap
    den_lcm = den_lcm / g * q;
  }
  std::int64_t num_gcd = 0;
  for (auto [p, q] : fracs) {
    num_gcd = gcd64(num_gcd, p * (den_lcm / q));
  }
  if (num_gcd == 0) return std::nullopt;
  // omega_j * T = 2 pi * m_j with integer m_j, T = 2 pi * L / (base * g).
  return kTwoPi * static_cast<double>(den_lcm) /
         (base * static_cast<double>(num_gcd));
}

double default_window(const TrigPoly& f) {
  require_nonzero(f, "default_window");
  const double b = f.bandwidth();
  if (b == 0.0) return 1000.0 * kTwoPi;
  return 1000.0 * (kTwoPi / b);
}

SublevelCurve sublevel_curve(const TrigPoly& f, std::vector<double> thresholds,
                             const SampleSpec& spec) {
  require_nonzero(f, "sublevel_curve");
  if (thresholds.empty()) throw invalid_input("sublevel_curve: empty thresholds");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] <= 0.0) throw invalid_input("sublevel_curve: thresholds must be positive");
    if (i > 0 && thresholds[i] <= thresholds[i - 1]) {
      throw invalid_input("sublevel_curve: thresholds must ascend");
    }
  }
  if (spec.samples < 1000) throw invalid_input("sublevel_curve: need >= 1000 samples");

  const Domain d = make_domain(f, spec);
  const double sup_bound = f.coeff_abs_sum();

  // Thresholds at or above sum|a| are sure events; only the rest get sampled.
  std::vector<double> active;
  for (double u : thresholds) {
    if (u < sup_bound) active.push_back(u);
  }
  std::vector<std::int64_t> counts = active.empty()
                                         ? std::vector<std::int64_t>{}
                                         : sublevel_counts(f, active, d, spec);

  SublevelCurve curve;
  curve.thresholds = std::move(thresholds);
  curve.window = d.half_window;
  curve.samples = spec.samples;
  curve.seed = spec.seed;
  curve.periodic = d.periodic;
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    if (i < counts.size()) {
      const double p = static_cast<double>(counts[i]) / static_cast<double>(spec.samples);
      curve.estimates.push_back(p);
      curve.std_errors.push_back(binomial_std_error(p, spec.samples));
    } else {
      curve.estimates.push_back(1.0);
      curve.std_errors.push_back(0.0);
    }
  }
  return curve;
}

ConstrainedSublevel constrained_sublevel(const TrigPoly& f, double omega, int order_max,
                                         double u, double v, const SampleSpec& spec) {
  require_nonzero(f, "constrained_sublevel");
  if (order_max < 1) throw invalid_input("constrained_sublevel: order_max must be >= 1");
  if (u <= 0.0 || v <= 0.0) throw invalid_input("constrained_sublevel: u, v must be positive");
  if (spec.samples < 1000) throw invalid_input("constrained_sublevel: need >= 1000 samples");

  const Domain d = make_domain(f, spec);
  const TrigPoly g = f.modulated(omega);
  std::vector<TrigPoly> deriv;
  std::vector<double> vpow;
  for (int j = 1; j <= order_max; ++j) {
    TrigPoly gj = g.derivative(j);
    if (!gj.is_zero()) {
      deriv.push_back(std::move(gj));
      vpow.push_back(std::pow(v, j));
    }
    // A vanished derivative makes that constraint vacuous.
  }

  constexpr std::int64_t kBlock = 8192;
  const std::int64_t nb = (spec.samples + kBlock - 1) / kBlock;
  std::vector<std::int64_t> partial(static_cast<std::size_t>(nb), 0);
  auto body = [&](std::int64_t b) {
    std::int64_t hits = 0;
    const std::int64_t end = std::min(spec.samples, (b + 1) * kBlock);
    for (std::int64_t i = b * kBlock; i < end; ++i) {
      const double x = d.point(spec.seed, i, spec.samples);
      if (!(std::abs(f(x)) < u)) continue;
      bool ok = true;
      for (std::size_t j = 0; j < deriv.size(); ++j) {
        if (!(std::abs(deriv[j](x)) < vpow[j])) {
          ok = false;
          break;
        }
      }
      if (ok) ++hits;
    }
    partial[static_cast<std::size_t>(b)] = hits;
  };
  if (spec.parallel) {
    parallel_for(nb, body);
  } else {
    for (std::int64_t b = 0; b < nb; ++b) body(b);
  }
  const std::int64_t total = std::accumulate(partial.begin(), partial.end(), std::int64_t{0});

  ConstrainedSublevel out;
  out.value = static_cast<double>(total) / static_cast<double>(spec.samples);
  out.std_error = binomial_std_error(out.value, spec.samples);
  out.omega = omega;
  out.order_max = order_max;
  out.u = u;
  out.v = v;
  return out;
}

BoundSearchResult sublevel_upper_bound(const TrigPoly& f, double u,
                                       const BoundSearchGrids& grids,
                                       const SampleSpec& spec) {
  require_nonzero(f, "sublevel_upper_bound");
  if (u <= 0.0) throw invalid_input("sublevel_upper_bound: u must be positive");
  if (grids.omegas.empty()) throw invalid_input("sublevel_upper_bound: empty omega grid");
  if (grids.order_max < 1) throw invalid_input("sublevel_upper_bound: order_max must be >= 1");
  std::vector<double> v_grid = grids.v_grid;
  if (v_grid.empty()) {
    for (int i = 0; i < 61; ++i) {
      v_grid.push_back(std::pow(10.0, -3.0 + 6.0 * i / 60.0));
    }
  }
  for (double v : v_grid) {
    if (v <= 0.0) throw invalid_input("sublevel_upper_bound: v grid must be positive");
  }
  std::sort(v_grid.begin(), v_grid.end());
  if (spec.samples < 1000) throw invalid_input("sublevel_upper_bound: need >= 1000 samples");

  const Domain d = make_domain(f, spec);
  const double bw = f.bandwidth();
  const int kmax = grids.order_max;
  const std::size_t nv = v_grid.size();

  BoundSearchResult best;
  best.value = std::numeric_limits<double>::infinity();

  for (double omega : grids.omegas) {
    const TrigPoly g = f.modulated(omega);
    std::vector<TrigPoly> deriv;  // exact derivatives of the modulated poly
    std::vector<bool> vanished;
    for (int j = 1; j <= kmax; ++j) {
      TrigPoly gj = g.derivative(j);
      vanished.push_back(gj.is_zero());
      deriv.push_back(std::move(gj));
    }

    // Per sample with |f| < u: running max over j of |g^{(j)}|^{1/j}; the
    // (k, v) event holds iff that max is < v.  Histogram over the v grid
    // gives all counts in one pass.
    constexpr std::int64_t kBlock = 8192;
    const std::int64_t nb = (spec.samples + kBlock - 1) / kBlock;
    const std::size_t row = nv + 1;
    std::vector<std::int64_t> partial(static_cast<std::size_t>(nb) * kmax * row, 0);
    auto body = [&](std::int64_t b) {
      std::int64_t* hist = partial.data() + static_cast<std::size_t>(b) * kmax * row;
      const std::int64_t end = std::min(spec.samples, (b + 1) * kBlock);
      for (std::int64_t i = b * kBlock; i < end; ++i) {
        const double x = d.point(spec.seed, i, spec.samples);
        if (!(std::abs(f(x)) < u)) continue;
        double running = 0.0;
        for (int k = 1; k <= kmax; ++k) {
          if (!vanished[static_cast<std::size_t>(k - 1)]) {
            const double m = std::abs(deriv[static_cast<std::size_t>(k - 1)](x));
            running = std::max(running, std::pow(m, 1.0 / k));
          }
          // Event holds for v > running: first strictly-greater grid index.
          const auto it = std::upper_bound(v_grid.begin(), v_grid.end(), running);
          const auto idx = static_cast<std::size_t>(it - v_grid.begin());
          ++hist[static_cast<std::size_t>(k - 1) * row + idx];
        }
      }
    };
    if (spec.parallel) {
      parallel_for(nb, body);
    } else {
      for (std::int64_t b = 0; b < nb; ++b) body(b);
    }

    std::vector<std::int64_t> hist(static_cast<std::size_t>(kmax) * row, 0);
    for (std::int64_t b = 0; b < nb; ++b) {
      const std::int64_t* src = partial.data() + static_cast<std::size_t>(b) * kmax * row;
      for (std::size_t j = 0; j < hist.size(); ++j) hist[j] += src[j];
    }

    for (int k = 1; k <= kmax; ++k) {
      std::int64_t acc = 0;
      const std::int64_t* hk = hist.data() + static_cast<std::size_t>(k - 1) * row;
      for (std::size_t t = 0; t < nv; ++t) {
        acc += hk[t];  // events with running max < v_grid[t] (indices <= t)
        const double xi = static_cast<double>(acc) / static_cast<double>(spec.samples);
        const double analytic =
            kSmallSetCoeff * bw * k / v_grid[t] * std::pow(u, 1.0 / k);
        const double candidate = std::max(0.0, analytic + xi);
        if (candidate < best.value) {
          best.value = candidate;
          best.analytic_term = analytic;
          best.constrained_value = xi;
          best.constrained_std_error = binomial_std_error(xi, spec.samples);
          best.omega = omega;
          best.order = k;
          best.v = v_grid[t];
        }
      }
    }
  }
  return best;
}

double small_value_bound(int n, double height, double u) {
  if (n < 1) throw invalid_input("small_value_bound: n must be >= 1");
  if (height <= 0.0) throw invalid_input("small_value_bound: height must be positive");
  if (u <= 0.0) throw invalid_input("small_value_bound: u must be positive");
  return std::exp(log_bound_constant(n) + (std::log(u) - std::log(height)) / n);
}

double neg_log_moment(const TrigPoly& f, double p, const SampleSpec& spec) {
  require_nonzero(f, "neg_log_moment");
  if (p < 1.0) throw invalid_input("neg_log_moment: p must be >= 1");
  if (spec.samples < 1000) throw invalid_input("neg_log_moment: need >= 1000 samples");
  const Domain d = make_domain(f, spec);
  // The zero set of a nonzero polynomial has measure zero; the clamp guards
  // the (probability-zero) exact hit.
  const double total = blocked_sum(
      spec.samples,
      [&](std::int64_t i) {
        const double m =
            std::max(std::abs(f(d.point(spec.seed, i, spec.samples))), 1e-300);
        const double neg = std::max(0.0, -std::log(m));
        return std::pow(neg, p);
      },
      spec.parallel);
  return total / static_cast<double>(spec.samples);
}

IntervalBoundReport interval_bound_trials(std::uint64_t seed, std::int64_t trials) {
  if (trials < 1) throw invalid_input("interval_bound_trials: trials must be >= 1");
  constexpr int kGrid = 2048;
  constexpr std::int64_t kChunk = 1024;
  const std::int64_t cap = std::max<std::int64_t>(trials * 64, 1 << 16);

  enum Outcome : std::uint8_t { kRejected, kHolds, kViolation, kDegenerate };

  IntervalBoundReport report;
  std::vector<std::uint8_t> outcome(static_cast<std::size_t>(kChunk));

  auto run_candidate = [&](std::int64_t c) -> std::uint8_t {
    SmallRng rng(stream(seed, static_cast<std::uint64_t>(c)));
    const int nterms = 2 + static_cast<int>(rng.below(3));
    std::vector<Term> terms;
    for (int t = 0; t < nterms; ++t) {
      const double omega = rng.uniform(-3.0, 3.0);
      const double mod = rng.uniform(0.2, 2.0);
      const double phase = rng.uniform(0.0, kTwoPi);
      terms.push_back({omega, std::polar(mod, phase)});
    }
    TrigPoly phi(std::move(terms));
    if (phi.term_count() < 2) return kRejected;
    const TrigPoly dphi = phi.derivative(1);
    if (dphi.is_zero()) return kRejected;

    const double a = rng.uniform(-5.0, 5.0);
    const double b = a + rng.uniform(0.05, 1.5);

    double max_abs = 0.0, min_dabs = std::numeric_limits<double>::infinity();
    double re_min = std::numeric_limits<double>::infinity(), re_max = -re_min;
    double im_min = re_min, im_max = -re_min;
    for (int g = 0; g < kGrid; ++g) {
      const double x = a + (b - a) * g / (kGrid - 1);
      max_abs = std::max(max_abs, std::abs(phi(x)));
      const cdouble dv = dphi(x);
      min_dabs = std::min(min_dabs, std::abs(dv));
      re_min = std::min(re_min, dv.real());
      re_max = std::max(re_max, dv.real());
      im_min = std::min(im_min, dv.imag());
      im_max = std::max(im_max, dv.imag());
    }
    const bool quadrant = (re_min >= 0.0 || re_max <= 0.0) && (im_min >= 0.0 || im_max <= 0.0);
    if (!quadrant) return kRejected;
    if (min_dabs < 1e-8) return kDegenerate;
    const double bound = 2.0 * std::numbers::sqrt2 * max_abs / min_dabs;
    return (b - a) <= bound ? kHolds : kViolation;
  };

  for (std::int64_t base = 0; base < cap && report.accepted < trials; base += kChunk) {
    const std::int64_t n = std::min(kChunk, cap - base);
    parallel_for(n, [&](std::int64_t i) {
      outcome[static_cast<std::size_t>(i)] = run_candidate(base + i);
    });
    // Accept in index order so the report is independent of thread count.
    for (std::int64_t i = 0; i < n && report.accepted < trials; ++i) {
      ++report.examined;
      switch (outcome[static_cast<std::size_t>(i)]) {
        case kRejected:
          break;
        case kDegenerate:
          ++report.degenerate_skips;
          break;
        case kViolation:
          ++report.accepted;
          ++report.violations;
          break;
        case kHolds:
          ++report.accepted;
          break;
      }
    }
  }
  return report;
}

double window_stability(const TrigPoly& f, double u, const SampleSpec& spec) {
  SampleSpec once = spec;
  SampleSpec twice = spec;
  twice.window = 2.0 * (spec.window > 0.0 ? spec.window : default_window(f));
  const double a = sublevel_curve(f, {u}, once).estimates[0];
  const double b = sublevel_curve(f, {u}, twice).estimates[0];
  return std::abs(a - b);
}

}  // namespace sublevel
