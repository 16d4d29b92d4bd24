#include "probprem/comparative.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "probprem/errors.hpp"
#include "probprem/premium.hpp"

namespace probprem {

namespace {
constexpr double kDominanceTol = 1e-10;

double ara(const UtilityModel& u, double x) { return -u.d2(x) / u.d1(x); }
double dara(const WeightingModel& h, double p) { return -h.d2(p) / h.d1(p); }

double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * unit(rng);
}
}  // namespace

IndexDominanceResult check_index_dominance(const UtilityModel& u1,
                                           const UtilityModel& u2,
                                           const WeightingModel& h1,
                                           const WeightingModel& h2,
                                           std::span<const double> x_grid,
                                           std::span<const double> p_grid) {
  if (x_grid.empty() || p_grid.empty())
    throw input_error("index dominance: empty grid");
  IndexDominanceResult res;
  res.worst_gap_utility = -std::numeric_limits<double>::infinity();
  res.worst_gap_weighting = -std::numeric_limits<double>::infinity();
  res.worst_x = x_grid.front();
  res.worst_p = p_grid.front();
  for (double x : x_grid) {
    const double gap = ara(u1, x) - ara(u2, x);
    if (gap > res.worst_gap_utility) {
      res.worst_gap_utility = gap;
      res.worst_x = x;
    }
  }
  for (double p : p_grid) {
    const double gap = dara(h1, p) - dara(h2, p);
    if (gap > res.worst_gap_weighting) {
      res.worst_gap_weighting = gap;
      res.worst_p = p;
    }
  }
  res.holds = res.worst_gap_utility <= kDominanceTol &&
              res.worst_gap_weighting <= kDominanceTol;
  return res;
}

PremiumDominanceResult check_premium_dominance(const UtilityModel& u1,
                                               const UtilityModel& u2,
                                               const WeightingModel& h1,
                                               const WeightingModel& h2,
                                               std::span<const SpreadSpec> sample,
                                               const SolverOptions& opts) {
  if (sample.empty()) throw input_error("premium dominance: empty sample");
  PremiumDominanceResult res;
  res.worst_gap = -std::numeric_limits<double>::infinity();
  for (const SpreadSpec& spec : sample) {
    const double mu1 = probability_premium_exact(spec, u1, h1, opts).mu_exact;
    const double mu2 = probability_premium_exact(spec, u2, h2, opts).mu_exact;
    if (mu1 - mu2 > res.worst_gap) {
      res.worst_gap = mu1 - mu2;
      res.worst_spec = spec;
    }
  }
  res.holds = res.worst_gap <= kDominanceTol;
  return res;
}

namespace {
bool midpoint_concave(const std::function<double(double)>& f1,
                      const std::function<double(double)>& f2,
                      std::span<const double> grid) {
  if (grid.size() < 2) throw input_error("concavification check: need >= 2 grid points");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    double x_lo = grid[i], x_hi = grid[i + 1];
    const double t_mid = 0.5 * (f1(x_lo) + f1(x_hi));
    // invert the increasing f1 on the segment
    double a = x_lo, b = x_hi;
    for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(b)); ++it) {
      const double m = 0.5 * (a + b);
      (f1(m) < t_mid ? a : b) = m;
    }
    const double x_mid = 0.5 * (a + b);
    const double chord = 0.5 * (f2(x_lo) + f2(x_hi));
    const double scale = 1.0 + std::abs(f2(x_lo)) + std::abs(f2(x_hi));
    if (f2(x_mid) < chord - 1e-10 * scale) return false;
  }
  return true;
}
}  // namespace

bool concavification_check(const UtilityModel& f1, const UtilityModel& f2,
                           std::span<const double> grid) {
  return midpoint_concave([&](double x) { return f1.value(x); },
                          [&](double x) { return f2.value(x); }, grid);
}

bool concavification_check(const WeightingModel& f1, const WeightingModel& f2,
                           std::span<const double> grid) {
  return midpoint_concave([&](double p) { return f1.value(p); },
                          [&](double p) { return f2.value(p); }, grid);
}

std::optional<SpreadSpec> find_premium_counterexample(
    const UtilityModel& u1, const UtilityModel& u2, const WeightingModel& h1,
    const WeightingModel& h2, const IndexDominanceResult& violation,
    int samples, unsigned seed, const SolverOptions& opts) {
  std::mt19937_64 rng(seed);
  const bool utility_side =
      violation.worst_gap_utility >= violation.worst_gap_weighting;
  const double x_star = violation.worst_x;
  const double p_star = std::clamp(violation.worst_p, 0.05, 0.95);
  const double x_scale = 0.1 * (1.0 + std::abs(x_star));

  for (int k = 0; k < samples; ++k) {
    const double p0 =
        std::clamp(p_star + uniform(rng, -0.05, 0.05), 0.02, 0.98);
    const double cap = std::min(p0, 1.0 - p0);
    double eps1, eps2;
    if (utility_side) {
      // a payoff-dominated spread isolates the utility index
      eps1 = uniform(rng, 0.02, 0.10) * cap;
      eps2 = uniform(rng, 2.0, 10.0) * x_scale;
    } else {
      eps1 = uniform(rng, 0.4, 1.0) * cap;
      eps2 = uniform(rng, 0.05, 0.5) * x_scale;
    }
    const double w0 = x_star + uniform(rng, -0.5, 0.5) * x_scale;
    if (!u1.in_domain(w0 - eps2) || !u1.in_domain(w0 + eps2) ||
        !u2.in_domain(w0 - eps2) || !u2.in_domain(w0 + eps2))
      continue;
    try {
      const SpreadSpec spec(w0, p0, eps1, eps2);
      const double mu1 = probability_premium_exact(spec, u1, h1, opts).mu_exact;
      const double mu2 = probability_premium_exact(spec, u2, h2, opts).mu_exact;
      if (mu2 < mu1 - kDominanceTol) return spec;
    } catch (const std::exception&) {
      continue;
    }
  }
  return std::nullopt;
}

}  // namespace probprem
