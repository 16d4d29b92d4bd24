#include "probprem/sharing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "probprem/errors.hpp"
#include "probprem/format.hpp"
#include "probprem/rdu.hpp"

namespace probprem {

double triangle_value(const TrianglePoint& pt, double loss, double w0,
                      const UtilityModel& u, const WeightingModel& h) {
  if (!(loss > 0.0)) throw input_error("triangle: loss must be positive");
  if (pt.q < -1e-12 || pt.p < -1e-12 || pt.p + pt.q > 1.0 + 1e-12)
    throw input_error("triangle: point (" + fmt_g17(pt.q) + ", " +
                      fmt_g17(pt.p) + ") outside the probability triangle");
  const double q = std::max(0.0, pt.q);
  const double p = std::max(0.0, pt.p);
  const double rest = std::max(0.0, 1.0 - p - q);
  return evaluate(Lottery({{w0 - loss, p}, {w0 - loss / 2.0, q}, {w0, rest}}),
                  u, h);
}

int prefers_pool(int n, double m, double eps1, double loss, double w0,
                 const UtilityModel& u, const WeightingModel& h) {
  const double pool = evaluate(make_b_n(n, eps1, loss, w0), u, h);
  const double solo = evaluate(make_a_star(eps1, m, loss, w0), u, h);
  if (pool > solo) return 1;
  if (pool < solo) return -1;
  return 0;
}

double critical_m_pool(int n, double eps1, double loss, double w0,
                       const UtilityModel& u, const WeightingModel& h,
                       const SolverOptions& opts) {
  const double pool = evaluate(make_b_n(n, eps1, loss, w0), u, h);
  const auto g = [&](double m) {
    return pool - evaluate(make_a_star(eps1, m, loss, w0), u, h);
  };
  // self-bearing improves with m, so g is decreasing
  const RootResult root = scan_bisect(g, 0.0, 1.0 - 1e-9, opts);
  return root.root;
}

std::vector<double> default_q_grid(double p0) {
  return linspace(0.0, std::min(0.5, 1.0 - p0), 101);
}

CurveTrace trace_indifference(double p0, double loss, double w0,
                              const UtilityModel& u, const WeightingModel& h,
                              std::span<const double> q_grid,
                              const SolverOptions& opts) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw input_error("trace: p0 must lie in (0,1)");
  const double base = triangle_value({0.0, p0}, loss, w0, u, h);

  CurveTrace trace;
  trace.p0 = p0;
  trace.slope_at_origin = std::numeric_limits<double>::quiet_NaN();
  for (double q : q_grid) {
    if (q < 0.0 || q > 1.0)
      throw input_error("trace: grid point q = " + fmt_g17(q) +
                        " outside [0,1]");
    if (q == 0.0) {
      trace.points.push_back({0.0, p0});
      trace.residuals.push_back(0.0);
      continue;
    }
    // p = p0 + delta - q/2 stays inside the triangle
    const double lo = q / 2.0 - p0;
    const double hi = 1.0 - q / 2.0 - p0;
    const auto g = [&](double delta) {
      return triangle_value({q, p0 + delta - q / 2.0}, loss, w0, u, h) - base;
    };
    try {
      const RootResult root = scan_bisect(g, lo, hi, opts);
      trace.points.push_back({q, p0 + root.root - q / 2.0});
      trace.residuals.push_back(root.f_root);
    } catch (const no_bracket_error&) {
      trace.skipped_q.push_back(q);
    }
  }

  for (const TrianglePoint& pt : trace.points) {
    if (pt.q > 0.0) {
      trace.slope_at_origin = (pt.p - p0) / pt.q;
      break;
    }
  }
  return trace;
}

Lottery make_independent_pool(double eps1, double loss, double w0) {
  if (!(loss > 0.0)) throw input_error("independent pool: loss must be positive");
  if (!(eps1 > 0.0 && eps1 < 1.0))
    throw input_error("independent pool: eps1 must lie in (0,1)");
  return Lottery({{w0 - loss, eps1 * eps1},
                  {w0 - loss / 2.0, 2.0 * eps1 * (1.0 - eps1)},
                  {w0, (1.0 - eps1) * (1.0 - eps1)}});
}

TrianglePoint best_on_budget(double p0, double loss, double w0,
                             const UtilityModel& u, const WeightingModel& h,
                             std::span<const double> q_grid) {
  if (q_grid.empty()) throw input_error("best_on_budget: empty grid");
  TrianglePoint best{0.0, p0};
  double best_value = -std::numeric_limits<double>::infinity();
  for (double q : q_grid) {
    const double p = p0 - q / 2.0;
    if (p < 0.0) continue;
    const TrianglePoint pt{q, p};
    const double v = triangle_value(pt, loss, w0, u, h);
    if (v > best_value) {
      best_value = v;
      best = pt;
    }
  }
  return best;
}

}  // namespace probprem
