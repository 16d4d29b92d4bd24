#pragma once
#include <optional>
#include <span>

#include "probprem/lottery.hpp"
#include "probprem/preferences.hpp"
#include "probprem/roots.hpp"

namespace probprem {

/// Grid verdict on whether DM 2 is everywhere at least as risk averse
/// as DM 1 in both local indexes. The worst gap on each side is
/// reported (positive gap = violation).
struct IndexDominanceResult {
  bool holds;
  double worst_gap_utility;  // max over x of ara1(x) - ara2(x)
  double worst_x;
  double worst_gap_weighting;  // max over p of dara1(p) - dara2(p)
  double worst_p;
};

IndexDominanceResult check_index_dominance(const UtilityModel& u1,
                                           const UtilityModel& u2,
                                           const WeightingModel& h1,
                                           const WeightingModel& h2,
                                           std::span<const double> x_grid,
                                           std::span<const double> p_grid);

struct PremiumDominanceResult {
  bool holds;
  double worst_gap;  // max over specs of mu1 - mu2
  std::optional<SpreadSpec> worst_spec;
};

/// mu2 >= mu1 - 1e-10 on every sampled spec.
PremiumDominanceResult check_premium_dominance(const UtilityModel& u1,
                                               const UtilityModel& u2,
                                               const WeightingModel& h1,
                                               const WeightingModel& h2,
                                               std::span<const SpreadSpec> sample,
                                               const SolverOptions& opts = {});

/// True iff f2 composed with the inverse of f1 is midpoint-concave
/// across the image of the grid (inverse by monotone bisection).
bool concavification_check(const UtilityModel& f1, const UtilityModel& f2,
                           std::span<const double> grid);
bool concavification_check(const WeightingModel& f1, const WeightingModel& f2,
                           std::span<const double> grid);

/// Randomized search for a spec with mu2 < mu1 - 1e-10, seeded around
/// the worst index violation. Deterministic for a fixed seed.
std::optional<SpreadSpec> find_premium_counterexample(
    const UtilityModel& u1, const UtilityModel& u2, const WeightingModel& h1,
    const WeightingModel& h2, const IndexDominanceResult& violation,
    int samples = 64, unsigned seed = 0x5eed1234u,
    const SolverOptions& opts = {});

}  // namespace probprem
