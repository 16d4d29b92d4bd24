#pragma once
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace probprem {

/// Parametric utility families with analytic derivatives. Values are
/// immutable; evaluation outside the declared domain throws.
class UtilityModel {
 public:
  enum class Family { Linear, Quadratic, Cara, Crra, PiecewiseLinear };

  static UtilityModel linear();
  /// U(x) = x - b x^2 / 2 on x < 1/b, b > 0.
  static UtilityModel quadratic(double b);
  /// U(x) = (1 - exp(-a x)) / a, a != 0.
  static UtilityModel cara(double a);
  /// U(x) = x^(1-gamma) / (1-gamma) on x > 0; ln x when gamma = 1.
  static UtilityModel crra(double gamma);
  /// Linear interpolation through strictly increasing knots (x, U(x)).
  static UtilityModel piecewise_linear(std::vector<std::pair<double, double>> knots);

  double value(double x) const;
  double d1(double x) const;  // throws at interior knots of piecewise models
  double d2(double x) const;

  double domain_lo() const { return lo_; }
  double domain_hi() const { return hi_; }
  bool in_domain(double x) const;

  /// scale * U + shift with scale > 0; same family and domain.
  UtilityModel affine(double scale, double shift) const;

  Family family() const { return family_; }

 private:
  UtilityModel(Family f, double param);
  Family family_;
  double param_ = 0.0;
  std::vector<std::pair<double, double>> knots_;
  double scale_ = 1.0;
  double shift_ = 0.0;
  double lo_, hi_;
  bool lo_open_ = false, hi_open_ = false;

  void check_domain(double x) const;
  double base_value(double x) const;
  double base_d1(double x) const;
  double base_d2(double x) const;
};

/// Probability weighting (distortion) families mapping [0,1] onto
/// itself with h(0) = 0, h(1) = 1, non-decreasing. Kinked families
/// (AvarKink, PiecewiseLinear) reject two-sided derivative queries at
/// their kinks; use one_sided there.
class WeightingModel {
 public:
  enum class Family {
    Identity,
    Power,
    Quadratic,
    Prelec,
    TverskyKahneman,
    AvarKink,
    PiecewiseLinear,
    Composed
  };

  static WeightingModel identity();
  /// h(p) = p^theta, theta > 0.
  static WeightingModel power(double theta);
  /// h(p) = 2p - p^2.
  static WeightingModel quadratic();
  /// h(p) = exp(-beta (-ln p)^alpha), endpoints by continuity.
  /// Derivative queries within 1e-9 of an endpoint are rejected: for
  /// alpha < 1 they diverge there.
  static WeightingModel prelec(double alpha, double beta);
  /// h(p) = p^g / (p^g + (1-p)^g)^(1/g); monotonicity checked on a grid.
  static WeightingModel tversky_kahneman(double gamma);
  /// h(p) = p / (1 - p0) capped at 1; kink at 1 - p0. The induced dual
  /// value of a lottery is the average of its worst (1-p0) tail.
  static WeightingModel avar_kink(double p0);
  static WeightingModel piecewise_linear(std::vector<std::pair<double, double>> knots);
  /// outer(inner(p)); outer must be smooth on (0,1).
  static WeightingModel compose(WeightingModel outer, WeightingModel inner);

  double value(double p) const;
  double d1(double p) const;
  double d2(double p) const;

  /// Left and right derivatives at p in (0,1); equal for smooth families.
  std::pair<double, double> one_sided(double p) const;

  std::vector<double> kinks() const;
  bool smooth_at(double p) const;

  Family family() const { return family_; }

 private:
  WeightingModel(Family f, double a, double b);
  Family family_;
  double a_ = 0.0, b_ = 0.0;
  std::vector<std::pair<double, double>> knots_;
  std::shared_ptr<const WeightingModel> outer_, inner_;

  void check_p(double& p) const;
  void check_interior_for_derivative(double p) const;
};

struct LocalIndexes {
  double ara;   // -U''(w0)/U'(w0)
  double dara;  // -h''(p0)/h'(p0)
};

LocalIndexes local_indexes(const UtilityModel& u, const WeightingModel& h,
                           double w0, double p0);

/// Textual specifiers, grammar family(:key=value(,key=value)*)?
/// Utilities: linear | quadratic:b= | cara:a= | crra:gamma=
/// Weightings: identity | power:theta= | quadw | prelec:alpha=,beta= |
///             tk:gamma= | avar:p0=
UtilityModel parse_utility(const std::string& text);
WeightingModel parse_weighting(const std::string& text);

}  // namespace probprem
