#include "probprem/premium.hpp"

#include <cmath>
#include <limits>

#include "probprem/errors.hpp"
#include "probprem/format.hpp"
#include "probprem/rdu.hpp"

namespace probprem {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_spec_domain(const SpreadSpec& spec, const UtilityModel& u) {
  if (!u.in_domain(spec.w0 - spec.eps2) || !u.in_domain(spec.w0 + spec.eps2))
    throw input_error("premium: support [w0-eps2, w0+eps2] = [" +
                      fmt_g17(spec.w0 - spec.eps2) + ", " +
                      fmt_g17(spec.w0 + spec.eps2) +
                      "] leaves the utility domain");
}

void fill_approx(PremiumReport& r, const SpreadSpec& spec,
                 const UtilityModel& u, const WeightingModel& h) {
  try {
    const ApproxTerms t = probability_premium_approx(spec, u, h);
    r.mu_approx_eu_term = t.eu_term;
    r.mu_approx_dt_term = t.dt_term;
    r.mu_approx_total = t.total;
  } catch (const input_error&) {
    r.mu_approx_eu_term = r.mu_approx_dt_term = r.mu_approx_total = kNan;
  }
}
}  // namespace

PremiumReport probability_premium_exact(const SpreadSpec& spec,
                                        const UtilityModel& u,
                                        const WeightingModel& h,
                                        const SolverOptions& opts) {
  check_spec_domain(spec, u);
  const double w = u.value(spec.w0);
  const double a = u.value(spec.w0 - spec.eps2);
  const double b = u.value(spec.w0 + spec.eps2);
  const double hp = h.value(spec.p0 + spec.eps1);
  const double hm = h.value(spec.p0 - spec.eps1);
  const auto g = [&](double mu) {
    const double x = h.value(spec.p0 - mu);
    return (hp - hm) * w - ((x - hm) * a + (hp - x) * b);
  };
  const RootResult root = scan_bisect(g, -(1.0 - spec.p0), spec.p0, opts);
  PremiumReport r;
  r.mu_exact = root.root;
  r.residual = root.f_root;
  r.iterations = root.iterations;
  r.bracket_lo = root.lo;
  r.bracket_hi = root.hi;
  r.sign_changes = root.sign_changes;
  fill_approx(r, spec, u, h);
  return r;
}

PremiumReport probability_premium_dt_exact(double p0, double eps1,
                                           const WeightingModel& h,
                                           const SolverOptions& opts) {
  const SpreadSpec spec(0.0, p0, eps1, 1.0);
  return probability_premium_exact(spec, UtilityModel::linear(), h, opts);
}

ApproxTerms probability_premium_approx(const SpreadSpec& spec,
                                       const UtilityModel& u,
                                       const WeightingModel& h) {
  const LocalIndexes li = local_indexes(u, h, spec.w0, spec.p0);
  ApproxTerms t;
  t.eu_term = 0.5 * spec.eps1 * spec.eps2 * li.ara;
  t.dt_term = 0.5 * spec.eps1 * spec.eps1 * li.dara;
  t.total = t.eu_term + t.dt_term;
  return t;
}

namespace {
double moment_form(const SpreadMoments& m, const LocalIndexes& li) {
  return m.m2 / (2.0 * m.py_star) * li.ara + m.mbar2 / (2.0 * m.py_star) * li.dara;
}
}  // namespace

double probability_premium_moment_form(const SpreadSpec& spec,
                                       const UtilityModel& u,
                                       const WeightingModel& h) {
  return moment_form(spread_moments(spec), local_indexes(u, h, spec.w0, spec.p0));
}

double probability_premium_moment_form(const NStateSpread& spec,
                                       const UtilityModel& u,
                                       const WeightingModel& h) {
  return moment_form(spread_moments(spec), local_indexes(u, h, spec.w0, spec.p0));
}

PremiumReport nstate_premium_exact(const NStateSpread& spec,
                                   const UtilityModel& u,
                                   const WeightingModel& h,
                                   const SolverOptions& opts) {
  const int n = spec.n();
  const int n1 = spec.n1;
  const int n2 = spec.n2;
  const double step = 2.0 * spec.eps1 / n;
  for (double x : spec.payoffs)
    if (!u.in_domain(spec.w0 + x))
      throw input_error("nstate premium: payoff w0 + " + fmt_g17(x) +
                        " leaves the utility domain");

  const double lhs =
      (h.value(spec.p0 + spec.eps1) - h.value(spec.p0 - spec.eps1)) *
      u.value(spec.w0);
  const auto g = [&](double mu) {
    double acc = 0.0;
    double h_prev = h.value(spec.p0 - spec.eps1);
    for (int i = 1; i <= n1; ++i) {
      const double bound = spec.p0 - spec.eps1 + step * i - mu * i;
      const double h_cur = h.value(bound);
      acc += (h_cur - h_prev) * u.value(spec.w0 + spec.payoffs[i - 1]);
      h_prev = h_cur;
    }
    const double ratio = static_cast<double>(n1) / n2;
    for (int i = n1 + 1; i <= n; ++i) {
      const double bound =
          spec.p0 - spec.eps1 - mu * n1 + step * i + mu * ratio * (i - n1);
      const double h_cur = h.value(bound);
      acc += (h_cur - h_prev) * u.value(spec.w0 + spec.payoffs[i - 1]);
      h_prev = h_cur;
    }
    return lhs - acc;
  };

  // mu must keep every shifted state probability non-negative
  const double mu_hi = step;
  const double mu_lo = -step * static_cast<double>(n2) / n1;
  const RootResult root = scan_bisect(g, mu_lo, mu_hi, opts);

  PremiumReport r;
  r.mu_exact = root.root;
  r.residual = root.f_root;
  r.iterations = root.iterations;
  r.bracket_lo = root.lo;
  r.bracket_hi = root.hi;
  r.sign_changes = root.sign_changes;
  try {
    const SpreadMoments m = spread_moments(spec);
    const LocalIndexes li = local_indexes(u, h, spec.w0, spec.p0);
    r.mu_approx_eu_term = m.m2 / (2.0 * m.py_star) * li.ara;
    r.mu_approx_dt_term = m.mbar2 / (2.0 * m.py_star) * li.dara;
    r.mu_approx_total = r.mu_approx_eu_term + r.mu_approx_dt_term;
  } catch (const input_error&) {
    r.mu_approx_eu_term = r.mu_approx_dt_term = r.mu_approx_total = kNan;
  }
  return r;
}

RiskPremiumReport risk_premium_exact(const SpreadSpec& spec,
                                     const UtilityModel& u,
                                     const WeightingModel& h,
                                     const SolverOptions& opts) {
  check_spec_domain(spec, u);
  const double base = evaluate(make_c(spec), u, h);
  const auto g = [&](double lambda) {
    // contraction with the middle branch lowered to w0 - lambda;
    // the Lottery constructor re-sorts and merges if branches touch
    const Lottery d_lambda({{spec.w0 - spec.eps2, spec.p0 - spec.eps1},
                            {spec.w0 - lambda, 2.0 * spec.eps1},
                            {spec.w0 + spec.eps2, 1.0 - spec.p0 - spec.eps1}});
    return evaluate(d_lambda, u, h) - base;
  };
  const RootResult root = scan_bisect(g, -spec.eps2, spec.eps2, opts);
  RiskPremiumReport r;
  r.lambda_exact = root.root;
  r.residual = root.f_root;
  r.iterations = root.iterations;
  r.bracket_lo = root.lo;
  r.bracket_hi = root.hi;
  try {
    r.lambda_approx_total = risk_premium_approx(spec, u, h);
  } catch (const input_error&) {
    r.lambda_approx_total = kNan;
  }
  return r;
}

double risk_premium_approx(const SpreadSpec& spec, const UtilityModel& u,
                           const WeightingModel& h) {
  const LocalIndexes li = local_indexes(u, h, spec.w0, spec.p0);
  return 0.5 * spec.eps2 * spec.eps2 * li.ara +
         0.5 * spec.eps1 * spec.eps2 * li.dara;
}

double premium_link_residual(const SpreadSpec& spec, const UtilityModel& u,
                             const WeightingModel& h,
                             const SolverOptions& opts) {
  const double mu = probability_premium_exact(spec, u, h, opts).mu_exact;
  const double lambda = risk_premium_exact(spec, u, h, opts).lambda_exact;
  const SpreadMoments m = spread_moments(spec);
  return mu * m.py - lambda * m.pr;
}

}  // namespace probprem
