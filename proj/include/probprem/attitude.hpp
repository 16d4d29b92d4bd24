#pragma once
#include <string>
#include <utility>
#include <vector>

#include "probprem/lottery.hpp"
#include "probprem/preferences.hpp"
#include "probprem/roots.hpp"

namespace probprem {

enum class AttitudeOrder {
  FirstOrderAverse,
  FirstOrderSeeking,
  SecondOrderAverse,
  SecondOrderSeeking,
  NeutralOrHigher
};

const char* to_string(AttitudeOrder order);

/// Order of the attitude towards probability at a point, with the raw
/// premium sequence kept for auditing. first_coeff is the extrapolated
/// limit of mu/eps1 as the shifted mass vanishes; second_coeff the
/// limit of mu/eps1^2 (NaN when the first-order coefficient already
/// decides the order).
struct AttitudeClassification {
  AttitudeOrder order;
  double first_coeff;
  double second_coeff;
  std::vector<std::pair<double, double>> diagnostics;  // (eps1, mu_exact)
};

/// Solves the exact premium on the geometric grid
/// eps1 = min(p0,1-p0)/4 * 2^-k, k = 0..10, Richardson-extrapolates
/// mu/eps1 (two levels), and classifies against the 1e-6 thresholds.
AttitudeClassification classify(double w0, double p0, double eps2,
                                const UtilityModel& u, const WeightingModel& h,
                                const SolverOptions& opts = {});

/// Limiting premium slope at a weighting kink under the dual theory:
/// (1 - h'+(p0)/h'-(p0)) / 2. Positive (first-order aversion) exactly
/// when the left slope exceeds the right slope; the formula assumes
/// that direction, matching a premium that approaches the kink from the
/// left. Requires h'-(p0) > 0.
double kink_slope(const WeightingModel& h, double p0);

/// Unfairness rate m* = mu_exact / eps1 at which the improved binary
/// risk and the contraction are indifferent: the contraction is
/// preferred for m < m*, the improved risk for m > m*.
double critical_m(const SpreadSpec& spec, const UtilityModel& u,
                  const WeightingModel& h, const SolverOptions& opts = {});

}  // namespace probprem
