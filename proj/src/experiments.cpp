#include "sublevel/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "sublevel/cnseq.hpp"
#include "sublevel/meanmeasure.hpp"

namespace sublevel {

namespace {

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Exact Pascal row; n is small enough that 64-bit entries suffice (n <= 62).
std::vector<std::uint64_t> binom_row(int n) {
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int k = i; k >= 1; --k) row[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k - 1)];
  }
  return row;
}

// Random (n+1)-term height-1 polynomial of the probe family.
AlgebraicPoly random_probe_poly(const ProbeConfig& cfg, SmallRng& rng) {
  const int n = cfg.n;
  std::vector<int> exponents;
  exponents.push_back(0);
  if (cfg.dense_exponents) {
    for (int e = 1; e <= n; ++e) exponents.push_back(e);
  } else {
    // n distinct draws from {1..2n} by partial Fisher-Yates.
    std::vector<int> pool;
    for (int e = 1; e <= 2 * n; ++e) pool.push_back(e);
    for (int i = 0; i < n; ++i) {
      const auto j = static_cast<std::size_t>(i + rng.below(static_cast<std::int64_t>(pool.size()) - i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      exponents.push_back(pool[static_cast<std::size_t>(i)]);
    }
    std::sort(exponents.begin(), exponents.end());
  }

  std::vector<double> moduli;
  std::vector<double> phases;
  double max_mod = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = 1.0 - rng.uniform();  // (0, 1]
    moduli.push_back(r);
    max_mod = std::max(max_mod, r);
    phases.push_back(cfg.real_coeffs ? (rng.uniform() < 0.5 ? 0.0 : std::numbers::pi)
                                     : rng.uniform(0.0, kTwoPi));
  }
  std::vector<cdouble> coeffs(static_cast<std::size_t>(exponents.back()) + 1, cdouble(0.0, 0.0));
  for (int i = 0; i <= n; ++i) {
    coeffs[static_cast<std::size_t>(exponents[static_cast<std::size_t>(i)])] =
        std::polar(moduli[static_cast<std::size_t>(i)] / max_mod,
                   phases[static_cast<std::size_t>(i)]);
  }
  return AlgebraicPoly(std::move(coeffs));
}

}  // namespace

AlgebraicPoly all_ones_poly(int n) {
  if (n < 1) throw invalid_input("all_ones_poly: n must be >= 1");
  return AlgebraicPoly(std::vector<cdouble>(static_cast<std::size_t>(n) + 1, cdouble(1.0, 0.0)));
}

AlgebraicPoly scaled_binomial_poly(int n) {
  if (n < 1) throw invalid_input("scaled_binomial_poly: n must be >= 1");
  if (n > 62) throw invalid_input("scaled_binomial_poly: n too large for exact row");
  const std::vector<std::uint64_t> row = binom_row(n);
  const auto norm = static_cast<double>(row[static_cast<std::size_t>(n / 2)]);
  std::vector<cdouble> coeffs;
  for (int k = 0; k <= n; ++k) {
    coeffs.emplace_back(static_cast<double>(row[static_cast<std::size_t>(k)]) / norm, 0.0);
  }
  return AlgebraicPoly(std::move(coeffs));
}

double binomial_sublevel_closed_form(int n, double u) {
  if (n < 1) throw invalid_input("binomial_sublevel_closed_form: n must be >= 1");
  if (u <= 0.0) throw invalid_input("binomial_sublevel_closed_form: u must be positive");
  const double arg = 0.5 * std::exp(log_binom(n, n / 2) / n) * std::pow(u, 1.0 / n);
  return 2.0 / std::numbers::pi * std::asin(std::min(1.0, arg));
}

double all_ones_sublevel_bound(int n, double u) {
  if (n < 1) throw invalid_input("all_ones_sublevel_bound: n must be >= 1");
  if (u <= 0.0) throw invalid_input("all_ones_sublevel_bound: u must be positive");
  return 2.0 / std::numbers::pi * std::asin(std::min(1.0, u));
}

ProbeReport extremal_probe(const ProbeConfig& config) {
  if (config.n < 2) throw invalid_input("extremal_probe: n must be >= 2");
  if (config.trials < 0) throw invalid_input("extremal_probe: trials must be >= 0");

  ProbeReport report;
  report.config = config;

  const AlgebraicPoly left = all_ones_poly(config.n);
  const AlgebraicPoly right = scaled_binomial_poly(config.n);
  report.log_m_minus_left = mahler_from_roots(left, config.tol).log_m_minus;
  report.log_m_minus_right = mahler_from_roots(right, config.tol).log_m_minus;

  // Endpoint candidates run through the same trial path as random draws.
  report.endpoint_dev_left =
      std::abs(mahler_from_roots(left, config.tol).log_m_minus - report.log_m_minus_left);
  report.endpoint_dev_right =
      std::abs(mahler_from_roots(right, config.tol).log_m_minus - report.log_m_minus_right);

  struct Trial {
    double log_m_minus = 0.0;
    bool failed = false;
    std::vector<cdouble> coeffs;
  };
  std::vector<Trial> trials(static_cast<std::size_t>(config.trials));
  auto body = [&](std::int64_t t) {
    SmallRng rng(stream(config.seed, static_cast<std::uint64_t>(t)));
    Trial& tr = trials[static_cast<std::size_t>(t)];
    try {
      const AlgebraicPoly r = random_probe_poly(config, rng);
      tr.coeffs = r.coefficients();
      tr.log_m_minus = mahler_from_roots(r, config.tol).log_m_minus;
    } catch (const accuracy_error&) {
      tr.failed = true;
    }
  };
  if (config.parallel) {
    parallel_for(config.trials, body);
  } else {
    for (std::int64_t t = 0; t < config.trials; ++t) body(t);
  }

  std::vector<double> values;
  for (std::int64_t t = 0; t < config.trials; ++t) {
    const Trial& tr = trials[static_cast<std::size_t>(t)];
    if (tr.failed) {
      ++report.root_failures;
      continue;
    }
    ++report.completed;
    values.push_back(tr.log_m_minus);
    const bool breach_left = tr.log_m_minus < report.log_m_minus_left;
    const bool breach_right = tr.log_m_minus > report.log_m_minus_right;
    if (!breach_left && !breach_right) continue;
    ++report.flagged;

    // Re-verify at tol/100 through both routes before reporting.
    try {
      const AlgebraicPoly r{std::vector<cdouble>(tr.coeffs)};
      const double strict_tol = config.tol / 100.0;
      const MahlerTriple again = mahler_from_roots(r, strict_tol);
      const MahlerTriple circle = mahler_from_circle(r, strict_tol);
      const double slack = again.err + circle.err;
      const bool left_confirmed =
          breach_left && again.log_m_minus < report.log_m_minus_left - slack &&
          circle.log_m_minus < report.log_m_minus_left - slack;
      const bool right_confirmed =
          breach_right && again.log_m_minus > report.log_m_minus_right + slack &&
          circle.log_m_minus > report.log_m_minus_right + slack;
      if (left_confirmed || right_confirmed) {
        ++report.confirmed;
        if (report.violations.size() < 64) {
          ProbeViolation v;
          v.coeffs = tr.coeffs;
          v.log_m_minus = tr.log_m_minus;
          v.left = left_confirmed;
          v.right = right_confirmed;
          v.recheck_log_m_minus_roots = again.log_m_minus;
          v.recheck_log_m_minus_circle = circle.log_m_minus;
          report.violations.push_back(std::move(v));
        }
      }
    } catch (const accuracy_error&) {
      ++report.root_failures;  // re-verification failed; not confirmed
    }
  }

  if (!values.empty()) {
    std::sort(values.begin(), values.end());
    report.min_log_m_minus = values.front();
    report.max_log_m_minus = values.back();
    report.median_log_m_minus = values[values.size() / 2];
  }
  return report;
}

BestConstantResult best_constant_probe(int n, std::int64_t trials,
                                       std::vector<double> u_grid, std::uint64_t seed,
                                       std::int64_t samples, bool parallel) {
  if (n < 1) throw invalid_input("best_constant_probe: n must be >= 1");
  if (trials < 1) throw invalid_input("best_constant_probe: trials must be >= 1");
  if (u_grid.empty()) {
    for (int i = 0; i < 25; ++i) {
      u_grid.push_back(std::pow(10.0, -3.0 + (std::log10(2.0) + 3.0) * i / 24.0));
    }
  }
  std::sort(u_grid.begin(), u_grid.end());
  for (double u : u_grid) {
    if (u <= 0.0) throw invalid_input("best_constant_probe: u grid must be positive");
  }

  struct Best {
    double value = 0.0;
    double u = 0.0;
  };
  std::vector<Best> per_trial(static_cast<std::size_t>(trials));
  auto body = [&](std::int64_t t) {
    SmallRng rng(stream(seed, static_cast<std::uint64_t>(t)));
    // Integer frequencies 0..n, random coefficients in the unit box.
    std::vector<Term> terms;
    for (int k = 0; k <= n; ++k) {
      const double mod = 1.0 - rng.uniform();
      terms.push_back({static_cast<double>(k), std::polar(mod, rng.uniform(0.0, kTwoPi))});
    }
    const TrigPoly f{std::move(terms)};
    const double height = f.height();
    SampleSpec spec;
    spec.samples = samples;
    spec.seed = stream(seed, static_cast<std::uint64_t>(t) + 0x10000000ull);
    spec.parallel = false;  // trials themselves run in parallel
    const SublevelCurve curve = sublevel_curve(f, u_grid, spec);
    Best b;
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
      const double ratio = curve.estimates[i] * std::pow(height, 1.0 / n) *
                           std::pow(u_grid[i], -1.0 / n);
      if (ratio > b.value) {
        b.value = ratio;
        b.u = u_grid[i];
      }
    }
    per_trial[static_cast<std::size_t>(t)] = b;
  };
  if (parallel) {
    parallel_for(trials, body);
  } else {
    for (std::int64_t t = 0; t < trials; ++t) body(t);
  }

  BestConstantResult out;
  out.n = n;
  out.trials = trials;
  out.reference_constant = std::exp(log_bound_constant(n));
  for (std::int64_t t = 0; t < trials; ++t) {
    const Best& b = per_trial[static_cast<std::size_t>(t)];
    if (b.value > out.probe_value) {
      out.probe_value = b.value;
      out.best_u = b.u;
      out.best_trial = t;
    }
  }
  return out;
}

double star_discrepancy(std::vector<double> points) {
  if (points.empty()) throw invalid_input("star_discrepancy: empty point set");
  for (double x : points) {
    if (!(x >= 0.0 && x < 1.0)) throw invalid_input("star_discrepancy: points must lie in [0,1)");
  }
  std::sort(points.begin(), points.end());
  const auto n = static_cast<double>(points.size());
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double xi = points[i];
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - xi);
    d = std::max(d, xi - static_cast<double>(i) / n);
  }
  return d;
}

}  // namespace sublevel
