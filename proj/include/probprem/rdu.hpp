#pragma once
#include "probprem/lottery.hpp"
#include "probprem/preferences.hpp"

namespace probprem {

/// Rank-dependent value: sum over ascending payoffs of
/// (h(F_i) - h(F_{i-1})) U(x_i), with the final cumulative clamped to 1.
/// Identity h gives expected utility; linear U gives the dual theory.
double evaluate(const Lottery& l, const UtilityModel& u, const WeightingModel& h);

/// Same value computed from decumulative probabilities with the
/// conjugate weighting 1 - h(1 - p). Kept as an independent cross-check
/// of `evaluate`.
double evaluate_dual(const Lottery& l, const UtilityModel& u,
                     const WeightingModel& h);

/// U^{-1}(evaluate) by monotone bisection on the support hull.
double certainty_equivalent(const Lottery& l, const UtilityModel& u,
                            const WeightingModel& h);

}  // namespace probprem
