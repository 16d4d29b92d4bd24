#pragma once
#include "probprem/lottery.hpp"
#include "probprem/preferences.hpp"
#include "probprem/roots.hpp"

namespace probprem {

/// Exact probability premium with its local approximation terms.
/// The approximation fields are NaN when U or h lacks the derivatives
/// at (w0, p0) (kinked weighting). `sign_changes` > 1 flags a
/// non-monotone indifference equation: the reported root is then the
/// one closest to zero among those detected.
struct PremiumReport {
  double mu_exact;
  double mu_approx_eu_term;
  double mu_approx_dt_term;
  double mu_approx_total;
  double residual;  // indifference-equation value at mu_exact
  int iterations;
  double bracket_lo, bracket_hi;
  int sign_changes;
};

struct RiskPremiumReport {
  double lambda_exact;
  double lambda_approx_total;
  double residual;
  int iterations;
  double bracket_lo, bracket_hi;
};

struct ApproxTerms {
  double eu_term;  // -1/2 eps1 eps2 U''(w0)/U'(w0)
  double dt_term;  // -1/2 eps1^2  h''(p0)/h'(p0)
  double total;
};

/// Solves the indifference equation
///   (h(p0+e1) - h(p0-e1)) U(w0)
///     = (h(p0-mu) - h(p0-e1)) U(w0-e2) + (h(p0+e1) - h(p0-mu)) U(w0+e2)
/// for mu on [-(1-p0), p0] by scan-and-bisect.
PremiumReport probability_premium_exact(const SpreadSpec& spec,
                                        const UtilityModel& u,
                                        const WeightingModel& h,
                                        const SolverOptions& opts = {});

/// Dual-theory specialization: 0 = h(p0-e1) - 2 h(p0-mu) + h(p0+e1).
PremiumReport probability_premium_dt_exact(double p0, double eps1,
                                           const WeightingModel& h,
                                           const SolverOptions& opts = {});

ApproxTerms probability_premium_approx(const SpreadSpec& spec,
                                       const UtilityModel& u,
                                       const WeightingModel& h);

/// m2/(2 Py*) ara + mbar2/(2 Py*) dara. For binary specs Py* equals the
/// payoff 1-norm and the value coincides with the Taylor form above.
double probability_premium_moment_form(const SpreadSpec& spec,
                                       const UtilityModel& u,
                                       const WeightingModel& h);
double probability_premium_moment_form(const NStateSpread& spec,
                                       const UtilityModel& u,
                                       const WeightingModel& h);

/// n-state premium: a uniform reduction mu of each unfavorable state
/// probability, increasing each favorable state probability by
/// mu n1/n2, restoring indifference with not bearing the risk.
PremiumReport nstate_premium_exact(const NStateSpread& spec,
                                   const UtilityModel& u,
                                   const WeightingModel& h,
                                   const SolverOptions& opts = {});

/// lambda such that the base risk is indifferent to the contraction
/// with its middle payoff lowered to w0 - lambda.
RiskPremiumReport risk_premium_exact(const SpreadSpec& spec,
                                     const UtilityModel& u,
                                     const WeightingModel& h,
                                     const SolverOptions& opts = {});

/// -1/2 eps2^2 U''/U' - 1/2 eps1 eps2 h''/h'.
double risk_premium_approx(const SpreadSpec& spec, const UtilityModel& u,
                           const WeightingModel& h);

/// mu Py - lambda Pr on the exact premia; vanishes only in the
/// small-risk limit (it is an exact identity for the approximations).
double premium_link_residual(const SpreadSpec& spec, const UtilityModel& u,
                             const WeightingModel& h,
                             const SolverOptions& opts = {});

}  // namespace probprem
