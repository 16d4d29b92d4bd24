#include "probprem/attitude.hpp"

#include <cmath>
#include <limits>

#include "probprem/errors.hpp"
#include "probprem/format.hpp"
#include "probprem/premium.hpp"

namespace probprem {

namespace {
constexpr double kCoeffThreshold = 1e-6;
constexpr int kGridLevels = 11;

// Two Richardson levels on a ratio-2 geometric grid: removes the O(eps)
// and O(eps^2) tails of the sequence.
double richardson2(const std::vector<double>& a) {
  std::vector<double> b(a.size() - 1);
  for (std::size_t k = 0; k + 1 < a.size(); ++k) b[k] = 2.0 * a[k + 1] - a[k];
  std::vector<double> c(b.size() - 1);
  for (std::size_t k = 0; k + 1 < b.size(); ++k)
    c[k] = (4.0 * b[k + 1] - b[k]) / 3.0;
  return c.back();
}
}  // namespace

const char* to_string(AttitudeOrder order) {
  switch (order) {
    case AttitudeOrder::FirstOrderAverse: return "FirstOrderAverse";
    case AttitudeOrder::FirstOrderSeeking: return "FirstOrderSeeking";
    case AttitudeOrder::SecondOrderAverse: return "SecondOrderAverse";
    case AttitudeOrder::SecondOrderSeeking: return "SecondOrderSeeking";
    case AttitudeOrder::NeutralOrHigher: return "NeutralOrHigher";
  }
  return "?";
}

AttitudeClassification classify(double w0, double p0, double eps2,
                                const UtilityModel& u, const WeightingModel& h,
                                const SolverOptions& opts) {
  if (!(p0 > 0.0 && p0 < 1.0))
    throw input_error("classify: p0 must lie in (0,1)");
  if (!(eps2 > 0.0)) throw input_error("classify: eps2 must be positive");
  const double eps0 = std::min(p0, 1.0 - p0) / 4.0;

  AttitudeClassification out;
  std::vector<double> first_seq, second_seq;
  for (int k = 0; k < kGridLevels; ++k) {
    const double eps1 = eps0 * std::pow(2.0, -k);
    double mu = 0.0;
    try {
      mu = probability_premium_exact(SpreadSpec(w0, p0, eps1, eps2), u, h, opts)
               .mu_exact;
    } catch (const solver_error& e) {
      throw solver_error(std::string(e.what()) + " (classify at eps1 = " +
                         fmt_g17(eps1) + ")");
    }
    out.diagnostics.emplace_back(eps1, mu);
    first_seq.push_back(mu / eps1);
    second_seq.push_back(mu / (eps1 * eps1));
  }

  out.first_coeff = richardson2(first_seq);
  out.second_coeff = std::numeric_limits<double>::quiet_NaN();
  if (std::abs(out.first_coeff) > kCoeffThreshold) {
    out.order = out.first_coeff > 0.0 ? AttitudeOrder::FirstOrderAverse
                                      : AttitudeOrder::FirstOrderSeeking;
    return out;
  }
  out.second_coeff = richardson2(second_seq);
  if (std::abs(out.second_coeff) > kCoeffThreshold) {
    out.order = out.second_coeff > 0.0 ? AttitudeOrder::SecondOrderAverse
                                       : AttitudeOrder::SecondOrderSeeking;
  } else {
    out.order = AttitudeOrder::NeutralOrHigher;
  }
  return out;
}

double kink_slope(const WeightingModel& h, double p0) {
  const auto [left, right] = h.one_sided(p0);
  if (!(left > 0.0))
    throw input_error("kink_slope: left derivative must be positive, got " +
                      fmt_g17(left));
  return 0.5 * (1.0 - right / left);
}

double critical_m(const SpreadSpec& spec, const UtilityModel& u,
                  const WeightingModel& h, const SolverOptions& opts) {
  return probability_premium_exact(spec, u, h, opts).mu_exact / spec.eps1;
}

}  // namespace probprem
