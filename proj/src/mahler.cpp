#include "sublevel/mahler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sublevel {

namespace {

double coeff_scale(const AlgebraicPoly& p) {
  double s = 0.0;
  for (const cdouble& c : p.coefficients()) s = std::max(s, std::abs(c));
  return s;
}

// Evaluation noise scale of p at z: sum |c_j| |z|^j.  A residual below
// eps * this is indistinguishable from an exact root in double precision.
double noise_scale(const AlgebraicPoly& p, double abs_z) {
  double s = 0.0;
  for (auto it = p.coefficients().rbegin(); it != p.coefficients().rend(); ++it) {
    s = s * abs_z + std::abs(*it);
  }
  return std::max(s, 1e-300);
}

// Durand-Kerner step over all roots; returns the largest correction.
double dk_sweep(const AlgebraicPoly& p, std::vector<cdouble>& roots) {
  const cdouble lead = p.leading();
  double max_corr = 0.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    cdouble denom = lead;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j != i) denom *= roots[i] - roots[j];
    }
    if (denom == cdouble(0.0, 0.0)) {
      // Coincident iterates: nudge apart (index-dependent, so coincident
      // groups separate) instead of dividing by zero.
      roots[i] += std::polar(1e-8 * (1.0 + static_cast<double>(i % 7)),
                             0.9 * static_cast<double>(i));
      max_corr = std::max(max_corr, 1e-8);
      continue;
    }
    const cdouble corr = p(roots[i]) / denom;
    roots[i] -= corr;
    max_corr = std::max(max_corr, std::abs(corr));
  }
  return max_corr;
}

double max_residual_of(const AlgebraicPoly& p, const std::vector<cdouble>& roots,
                       double scale) {
  (void)scale;
  double r = 0.0;
  for (const cdouble& z : roots) {
    r = std::max(r, std::abs(p(z)) / noise_scale(p, std::abs(z)));
  }
  return r;
}

// Multiple roots stall the simultaneous iteration in a ring of radius
// ~eps^(1/m) around the true root; the ring centroid is far more accurate
// than any member.  Group stalled roots transitively (members of one ring
// are mutually closer than the link radius), refine each centroid with the
// multiplicity-aware Newton step x -= m p/p', and keep a snap only where the
// residual certificate does not degrade.
void try_cluster_snap(const AlgebraicPoly& p, std::vector<cdouble>& roots,
                      double stall_radius, double scale) {
  const std::size_t n = roots.size();
  if (n < 2) return;
  const double tau = std::max(20.0 * stall_radius, 1e-12);

  // Single-link grouping by BFS over the proximity graph.
  std::vector<int> group(n, -1);
  int ngroups = 0;
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (group[i] >= 0) continue;
    group[i] = ngroups;
    queue.assign(1, i);
    while (!queue.empty()) {
      const std::size_t v = queue.back();
      queue.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (group[j] < 0 && std::abs(roots[v] - roots[j]) < tau) {
          group[j] = ngroups;
          queue.push_back(j);
        }
      }
    }
    ++ngroups;
  }

  const AlgebraicPoly dp = p.derivative();
  for (int g = 0; g < ngroups; ++g) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (group[i] == g) members.push_back(i);
    }
    if (members.size() < 2) continue;
    const auto m = static_cast<double>(members.size());
    cdouble c(0.0, 0.0);
    for (std::size_t i : members) c += roots[i];
    c /= m;
    for (int it = 0; it < 40; ++it) {
      const cdouble dv = dp(c);
      if (dv == cdouble(0.0, 0.0)) break;
      const cdouble step = m * p(c) / dv;
      c -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(c))) break;
    }
    double member_res = 0.0;
    for (std::size_t i : members) {
      member_res = std::max(member_res,
                            std::abs(p(roots[i])) / noise_scale(p, std::abs(roots[i])));
    }
    const double snap_res = std::abs(p(c)) / noise_scale(p, std::abs(c));
    if (snap_res <= std::max(member_res * 4.0, 1e-13)) {
      for (std::size_t i : members) roots[i] = c;
    }
  }
}

double arg_in_2pi(cdouble z) {
  double a = std::arg(z);
  if (a < 0.0) a += kTwoPi;
  return a;
}

// Sieve of mu(1..n) by factoring with the smallest-prime-factor table.
std::vector<int> mobius_sieve(int n) {
  std::vector<int> spf(n + 1, 0);
  std::vector<int> mu(n + 1, 0);
  mu[1] = 1;
  std::vector<int> primes;
  for (int i = 2; i <= n; ++i) {
    if (spf[i] == 0) {
      spf[i] = i;
      mu[i] = -1;
      primes.push_back(i);
    }
    for (int q : primes) {
      if (q > spf[i] || static_cast<std::int64_t>(q) * i > n) break;
      spf[q * i] = q;
      mu[q * i] = (q == spf[i]) ? 0 : -mu[i];
    }
  }
  return mu;
}

}  // namespace

RootResult find_roots(const AlgebraicPoly& p, double tol) {
  if (p.degree() < 1) throw invalid_input("find_roots: degree must be >= 1");
  if (tol <= 0.0) throw invalid_input("find_roots: tol must be positive");
  const double scale = coeff_scale(p);

  // Exact roots at the origin: strip low-order zero coefficients.
  std::vector<cdouble> c = p.coefficients();
  std::size_t zeros = 0;
  while (zeros < c.size() - 1 && c[zeros] == cdouble(0.0, 0.0)) ++zeros;
  std::vector<cdouble> reduced(c.begin() + static_cast<std::ptrdiff_t>(zeros), c.end());
  const AlgebraicPoly q{std::vector<cdouble>(reduced)};

  RootResult out;
  out.roots.assign(zeros, cdouble(0.0, 0.0));

  const int d = q.degree();
  if (d >= 1) {
    // Perturbed circle of radius = geometric mean of root moduli.
    const double r0 = std::pow(std::abs(q.constant() / q.leading()), 1.0 / d);
    const double r = std::clamp(r0, 1e-3, 1e3);
    std::vector<cdouble> roots(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const double angle = kTwoPi * k / d + 0.7;
      roots[static_cast<std::size_t>(k)] =
          std::polar(r * (1.0 + 0.05 * std::cos(1.7 * k + 0.3)), angle);
    }

    // Sweep until the corrections stop halving: simple roots converge to
    // rounding level, multiple roots plateau at the cluster radius (an
    // 80-sweep improvement window tells the two apart).  A plateau triggers
    // a cluster snap; if the certificate is still unmet and budget remains,
    // sweeping resumes -- a plateau can be a slow phase rather than a
    // genuine cluster.
    constexpr int kMaxIter = 500;
    double corr = std::numeric_limits<double>::infinity();
    int it = 0;
    while (it < kMaxIter) {
      double window_best = std::numeric_limits<double>::infinity();
      int window_start = it;
      bool plateau = false;
      for (; it < kMaxIter; ++it) {
        corr = dk_sweep(q, roots);
        if (corr < 1e-15 * (1.0 + r)) break;
        if (corr < 0.5 * window_best) {
          window_best = corr;
          window_start = it;
        } else if (it - window_start >= 80) {
          plateau = true;
          ++it;
          break;
        }
      }
      try_cluster_snap(q, roots, corr, scale);
      if (!plateau || max_residual_of(q, roots, scale) <= 0.5 * tol) break;
    }
    out.iterations = it;
    out.roots.insert(out.roots.end(), roots.begin(), roots.end());
  }

  out.max_residual = max_residual_of(p, out.roots, scale);
  if (out.max_residual > tol) {
    throw accuracy_error("find_roots: residual " + std::to_string(out.max_residual) +
                             " above tolerance after iteration cap",
                         out.max_residual, out.max_residual);
  }
  return out;
}

std::string to_string(MahlerMethod m) {
  switch (m) {
    case MahlerMethod::jensen:
      return "jensen";
    case MahlerMethod::quadrature:
      return "quadrature";
    case MahlerMethod::sampling:
      return "sampling";
  }
  return "unknown";
}

MahlerTriple mahler_from_roots(const AlgebraicPoly& p, double tol) {
  if (p.degree() < 1) throw invalid_input("mahler_from_roots: degree must be >= 1");
  const RootResult rr = find_roots(p, std::max(tol, 1e-13));

  const AlgebraicPoly dp = p.derivative();
  double log_m = std::log(std::abs(p.leading()));
  double root_err = 0.0;
  std::vector<double> singular;
  for (const cdouble& z : rr.roots) {
    const double az = std::abs(z);
    if (az > 1.0) log_m += std::log(az);
    if (std::abs(az - 1.0) < 1e-3) singular.push_back(arg_in_2pi(z));
    // First-order root sensitivity |p(z)/p'(z)|, capped for clustered roots
    // (their snapped centroid is better than the local slope suggests).
    if (az > 0.9) {
      const double slope = std::abs(dp(z));
      const double dz = std::min(std::abs(p(z)) / std::max(slope, 1e-30), 1e-4);
      root_err += dz / std::max(1.0, az);
    }
  }
  root_err = std::max(root_err, 1e-15 * static_cast<double>(p.degree()));

  // Cross-check against the constant-coefficient form when available:
  // circle mean of log|p| = log|p(0)| - sum over |z|<1 of log|z|.
  if (std::abs(p.constant()) > 0.0) {
    double log_m0 = std::log(std::abs(p.constant()));
    for (const cdouble& z : rr.roots) {
      const double az = std::abs(z);
      if (az < 1.0 && az > 0.0) log_m0 -= std::log(az);
    }
    root_err = std::max(root_err, std::abs(log_m0 - log_m));
  }

  // log m_minus by integrating the root-factored magnitude; the root angles
  // near the circle are the only singular points.  Squared distances are
  // multiplied up and logged in batches to keep this one log per ~16 roots.
  const cdouble lead = p.leading();
  const std::vector<cdouble> roots = rr.roots;
  auto log_abs = [lead, roots](double theta) {
    const cdouble z = std::polar(1.0, theta);
    double s = std::log(std::abs(lead));
    double prod = 1.0;
    int pending = 0;
    for (const cdouble& r : roots) {
      prod *= std::norm(z - r);
      if (++pending == 16 || prod < 1e-280 || prod > 1e280) {
        s += 0.5 * std::log(prod);
        prod = 1.0;
        pending = 0;
      }
    }
    if (pending > 0) s += 0.5 * std::log(prod);
    return s;
  };
  PanelOptions opt;
  opt.tol = std::max(tol * 0.5, 1e-12);
  const CircleLogIntegral qi = integrate_circle_log(log_abs, singular, opt);
  if (!qi.converged) {
    throw accuracy_error("mahler_from_roots: quadrature budget exhausted", log_m, qi.err);
  }

  MahlerTriple t;
  t.method = MahlerMethod::jensen;
  t.log_m = log_m;
  t.log_m_minus = std::min(0.0, qi.neg);
  t.log_m_plus = log_m - t.log_m_minus;
  if (t.log_m_plus < 0.0) {
    // Numerically inconsistent split; clamp and widen the error bar.
    root_err = std::max(root_err, -t.log_m_plus);
    t.log_m_plus = 0.0;
    t.log_m_minus = log_m;
  }
  t.err = root_err + qi.err;
  t.m = std::exp(t.log_m);
  t.m_plus = std::exp(t.log_m_plus);
  t.m_minus = std::exp(t.log_m_minus);
  return t;
}

MahlerTriple mahler_from_circle(const std::function<double(double)>& log_abs,
                                std::vector<double> singular_angles, double tol,
                                const PanelOptions* options) {
  PanelOptions opt = options ? *options : PanelOptions{};
  opt.tol = tol;
  const CircleLogIntegral qi = integrate_circle_log(log_abs, std::move(singular_angles), opt);
  MahlerTriple t;
  t.method = MahlerMethod::quadrature;
  t.log_m_plus = std::max(0.0, qi.pos);
  t.log_m_minus = std::min(0.0, qi.neg);
  t.log_m = t.log_m_plus + t.log_m_minus;
  t.err = qi.err;
  t.m = std::exp(t.log_m);
  t.m_plus = std::exp(t.log_m_plus);
  t.m_minus = std::exp(t.log_m_minus);
  if (!qi.converged) {
    throw accuracy_error("mahler_from_circle: error estimate " + std::to_string(qi.err) +
                             " above tolerance at panel budget",
                         t.log_m, qi.err);
  }
  return t;
}

MahlerTriple mahler_from_circle(const AlgebraicPoly& p, double tol) {
  // Locate near-circle zeros with a magnitude scan so the graded panels know
  // where to shrink.  Everything here uses evaluations only; no root data.
  const int scan = std::max(2048, 256 * (p.degree() + 1));
  const double scale = coeff_scale(p);
  std::vector<double> mags(static_cast<std::size_t>(scan));
  for (int i = 0; i < scan; ++i) {
    mags[static_cast<std::size_t>(i)] =
        std::abs(p(std::polar(1.0, kTwoPi * (i + 0.5) / scan)));
  }
  std::vector<double> hints;
  for (int i = 0; i < scan; ++i) {
    const double prev = mags[static_cast<std::size_t>((i + scan - 1) % scan)];
    const double next = mags[static_cast<std::size_t>((i + 1) % scan)];
    const double cur = mags[static_cast<std::size_t>(i)];
    if (cur <= prev && cur <= next && cur < 0.2 * scale) {
      // Parabolic vertex of |p|^2 through the three neighbors.
      const double y0 = prev * prev, y1 = cur * cur, y2 = next * next;
      const double denom = y0 - 2.0 * y1 + y2;
      const double shift = denom > 0.0 ? std::clamp(0.5 * (y0 - y2) / denom, -1.0, 1.0) : 0.0;
      hints.push_back(kTwoPi * (i + 0.5 + shift) / scan);
    }
  }
  auto log_abs = [&p](double theta) { return p.log_abs_on_circle(theta); };
  return mahler_from_circle(log_abs, std::move(hints), tol);
}

CyclotomicPlan::CyclotomicPlan(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw invalid_input("CyclotomicPlan: n_max must be >= 1");
  std::vector<int> mu = mobius_sieve(n_max);
  mobius_.assign(mu.begin() + 1, mu.end());  // mu(1..N)

  // w_d = sum_{k <= N, d | k} mu(k/d) = Mertens(N/d).
  std::vector<std::int64_t> mertens(static_cast<std::size_t>(n_max) + 1, 0);
  std::int64_t acc = 0;
  for (int i = 1; i <= n_max; ++i) {
    acc += mu[static_cast<std::size_t>(i)];
    mertens[static_cast<std::size_t>(i)] = acc;
  }
  weights_.resize(static_cast<std::size_t>(n_max));
  for (int d = 1; d <= n_max; ++d) {
    weights_[static_cast<std::size_t>(d - 1)] = mertens[static_cast<std::size_t>(n_max / d)];
  }

  // Degree identity: sum w_d * d must equal sum of Euler phi over 1..N.
  std::int64_t wsum = 0;
  for (int d = 1; d <= n_max; ++d) {
    wsum += weights_[static_cast<std::size_t>(d - 1)] * d;
  }
  std::vector<int> phi(static_cast<std::size_t>(n_max) + 1);
  std::iota(phi.begin(), phi.end(), 0);
  for (int i = 2; i <= n_max; ++i) {
    if (phi[static_cast<std::size_t>(i)] == i) {  // prime
      for (int j = i; j <= n_max; j += i) {
        phi[static_cast<std::size_t>(j)] -= phi[static_cast<std::size_t>(j)] / i;
      }
    }
  }
  std::int64_t phisum = 0;
  for (int i = 1; i <= n_max; ++i) phisum += phi[static_cast<std::size_t>(i)];
  if (wsum != phisum) {
    throw std::logic_error("CyclotomicPlan: degree identity failed");
  }
  degree_ = phisum;
}

double CyclotomicPlan::log_abs(double theta) const {
  double s = 0.0;
  for (int d = 1; d <= n_max_; ++d) {
    const std::int64_t w = weights_[static_cast<std::size_t>(d - 1)];
    if (w == 0) continue;
    s += static_cast<double>(w) * std::log(2.0 * std::abs(std::sin(0.5 * d * theta)));
  }
  return s;
}

std::function<double(double)> cyclotomic_log_evaluator(const CyclotomicPlan& plan) {
  return [&plan](double theta) { return plan.log_abs(theta); };
}

std::vector<Fraction> farey_angles(int n) {
  if (n < 1) throw invalid_input("farey_angles: order must be >= 1");
  std::vector<Fraction> out;
  // Standard next-term recurrence for the ascending Farey sequence.
  std::int64_t a = 0, b = 1, c = 1, d = n;
  out.push_back({0, 1});
  while (c <= n) {
    const std::int64_t k = (n + b) / d;
    const std::int64_t a2 = k * c - a;
    const std::int64_t b2 = k * d - b;
    a = c;
    b = d;
    c = a2;
    d = b2;
    if (a == b) break;  // reached 1/1, excluded from [0,1)
    out.push_back({a, b});
  }
  return out;
}

CyclotomicMPlus cyclotomic_log_mplus(int n, double tol, std::int64_t samples,
                                     std::uint64_t seed, bool parallel) {
  if (n < 1) throw invalid_input("cyclotomic_log_mplus: order must be >= 1");
  if (samples < 1000) throw invalid_input("cyclotomic_log_mplus: need >= 1000 samples");
  const CyclotomicPlan plan(n);
  auto log_abs = cyclotomic_log_evaluator(plan);

  std::vector<double> corners;
  for (const Fraction& f : farey_angles(n)) corners.push_back(kTwoPi * f.value());

  // Positive part only: the integrand vanishes near every zero, so the
  // Farey corners need splitting but no geometric grading.
  PanelOptions opt;
  opt.tol = tol;
  opt.positive_only = true;
  opt.grade_singularities = false;
  opt.initial_per_segment = 4;
  opt.parallel = parallel;
  const CircleLogIntegral qi = integrate_circle_log(log_abs, corners, opt);
  if (!qi.converged) {
    throw accuracy_error("cyclotomic_log_mplus: quadrature budget exhausted", qi.pos, qi.err);
  }

  // Sampling route: log M+ = -log M- = period mean of max(0, -log|.|),
  // stratified over [0, 2pi).  Clamped at the denormal floor; exact zeros
  // are a measure-zero event.  One pass accumulates value and square with
  // the same fixed block shape as blocked_sum.
  const double width = kTwoPi / static_cast<double>(samples);
  auto sample_value = [&](std::int64_t i) {
    double u = to_unit(stream(seed, static_cast<std::uint64_t>(i)));
    u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
    const double theta = (static_cast<double>(i) + u) * width;
    double s = 0.0;
    for (int d = 1; d <= n; ++d) {
      const std::int64_t w = plan.weights()[static_cast<std::size_t>(d - 1)];
      if (w == 0) continue;
      s += static_cast<double>(w) *
           std::log(std::max(2.0 * std::abs(std::sin(0.5 * d * theta)), 1e-300));
    }
    return std::max(0.0, -s);
  };
  constexpr std::int64_t kBlock = 4096;
  const std::int64_t nb = (samples + kBlock - 1) / kBlock;
  std::vector<double> part_v(static_cast<std::size_t>(nb)), part_sq(static_cast<std::size_t>(nb));
  auto body = [&](std::int64_t b) {
    double sv = 0.0, sq = 0.0;
    const std::int64_t end = std::min(samples, (b + 1) * kBlock);
    for (std::int64_t i = b * kBlock; i < end; ++i) {
      const double v = sample_value(i);
      sv += v;
      sq += v * v;
    }
    part_v[static_cast<std::size_t>(b)] = sv;
    part_sq[static_cast<std::size_t>(b)] = sq;
  };
  if (parallel) {
    parallel_for(nb, body);
  } else {
    for (std::int64_t b = 0; b < nb; ++b) body(b);
  }
  const double mean = pairwise_sum(part_v) / static_cast<double>(samples);
  const double mean_sq = pairwise_sum(part_sq) / static_cast<double>(samples);
  const double variance = std::max(0.0, mean_sq - mean * mean);

  CyclotomicMPlus out;
  out.quadrature = qi.pos;
  out.quadrature_err = qi.err;
  out.sampling = mean;
  out.sampling_std_error = std::sqrt(variance / static_cast<double>(samples));
  out.panels = qi.panels;
  return out;
}

OuterResult outer_test(const AlgebraicPoly& p, double tol) {
  OuterResult out;
  out.mean_nonzero = std::abs(p.constant()) > 0.0;

  if (p.degree() == 0) {
    out.min_root_modulus = std::numeric_limits<double>::infinity();
    out.outer = out.mean_nonzero;
    out.jensen_residual = 0.0;
    return out;
  }
  const RootResult rr = find_roots(p, std::max(tol, 1e-12));
  double min_mod = std::numeric_limits<double>::infinity();
  for (const cdouble& z : rr.roots) min_mod = std::min(min_mod, std::abs(z));
  out.min_root_modulus = min_mod;
  out.outer = out.mean_nonzero && min_mod >= 1.0 - tol;

  if (!out.mean_nonzero) {
    out.jensen_residual = std::numeric_limits<double>::infinity();
    return out;
  }
  const MahlerTriple q = mahler_from_circle(p, std::max(1e-10, tol * 1e-2));
  out.jensen_residual = std::abs(q.log_m - std::log(std::abs(p.constant())));
  return out;
}

}  // namespace sublevel
