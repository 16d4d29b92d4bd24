#pragma once
#include <span>
#include <vector>

#include "probprem/lottery.hpp"
#include "probprem/preferences.hpp"
#include "probprem/roots.hpp"

namespace probprem {

/// A point of the (q, p) risk triangle: lose `loss` with probability p,
/// lose loss/2 with probability q, nothing otherwise; p, q >= 0 and
/// p + q <= 1.
struct TrianglePoint {
  double q;
  double p;
};

/// Rank-dependent value of the risk a triangle point represents.
double triangle_value(const TrianglePoint& pt, double loss, double w0,
                      const UtilityModel& u, const WeightingModel& h);

/// Sign of value(pool of n) - value(unfair self-bearing): +1 when the
/// pool is preferred, -1 when self-bearing is, 0 on exact indifference.
int prefers_pool(int n, double m, double eps1, double loss, double w0,
                 const UtilityModel& u, const WeightingModel& h);

/// Unfairness rate at which pooling and self-bearing become
/// indifferent, by bisection on m in [0, 1).
double critical_m_pool(int n, double eps1, double loss, double w0,
                       const UtilityModel& u, const WeightingModel& h,
                       const SolverOptions& opts = {});

/// Indifference curve through the no-sharing point (0, p0), one solved
/// point per grid abscissa. Unsolvable grid points are recorded in
/// skipped_q rather than interpolated.
struct CurveTrace {
  std::vector<TrianglePoint> points;
  std::vector<double> residuals;  // value(pt) - value(0, p0) per point
  std::vector<double> skipped_q;
  double p0;
  double slope_at_origin;  // one-sided difference from the smallest point
};

CurveTrace trace_indifference(double p0, double loss, double w0,
                              const UtilityModel& u, const WeightingModel& h,
                              std::span<const double> q_grid,
                              const SolverOptions& opts = {});

/// 101 equally spaced abscissae on [0, min(0.5, 1 - p0)].
std::vector<double> default_q_grid(double p0);

/// Allotment from equal sharing between two independent risks
/// (rather than mutually exclusive ones):
/// {-loss: eps1^2, -loss/2: 2 eps1 (1-eps1), 0: (1-eps1)^2} at w0.
Lottery make_independent_pool(double eps1, double loss, double w0);

/// Most preferred point of the budget segment p + q/2 = p0 among the
/// grid abscissae (the continuous menu is scanned, not optimized).
TrianglePoint best_on_budget(double p0, double loss, double w0,
                             const UtilityModel& u, const WeightingModel& h,
                             std::span<const double> q_grid);

}  // namespace probprem
