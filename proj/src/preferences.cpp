#include "probprem/preferences.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

#include "probprem/errors.hpp"
#include "probprem/format.hpp"

namespace probprem {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kKinkTol = 1e-12;
constexpr double kEndpointGuard = 1e-9;

double pwl_interp(const std::vector<std::pair<double, double>>& knots, double x) {
  auto it = std::upper_bound(
      knots.begin(), knots.end(), x,
      [](double v, const std::pair<double, double>& k) { return v < k.first; });
  if (it == knots.begin()) return knots.front().second;
  if (it == knots.end()) return knots.back().second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (x - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

// Slope of the segment containing x. Interior knots have no two-sided
// derivative; `at_knot` reports a hit within kKinkTol.
double pwl_slope(const std::vector<std::pair<double, double>>& knots, double x,
                 bool* at_knot) {
  *at_knot = false;
  for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
    if (std::abs(x - knots[i].first) <= kKinkTol) {
      *at_knot = true;
      return kNan;
    }
  }
  auto it = std::upper_bound(
      knots.begin(), knots.end(), x,
      [](double v, const std::pair<double, double>& k) { return v < k.first; });
  if (it == knots.begin()) ++it;
  if (it == knots.end()) --it;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return (hi.second - lo.second) / (hi.first - lo.first);
}

std::pair<double, double> pwl_one_sided(
    const std::vector<std::pair<double, double>>& knots, double x) {
  for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
    if (std::abs(x - knots[i].first) <= kKinkTol) {
      const double left = (knots[i].second - knots[i - 1].second) /
                          (knots[i].first - knots[i - 1].first);
      const double right = (knots[i + 1].second - knots[i].second) /
                           (knots[i + 1].first - knots[i].first);
      return {left, right};
    }
  }
  bool at_knot = false;
  const double s = pwl_slope(knots, x, &at_knot);
  return {s, s};
}
}  // namespace

UtilityModel::UtilityModel(Family f, double param)
    : family_(f), param_(param), lo_(-kInf), hi_(kInf) {}

UtilityModel UtilityModel::linear() { return UtilityModel(Family::Linear, 0.0); }

UtilityModel UtilityModel::quadratic(double b) {
  if (!(b > 0.0)) throw input_error("quadratic utility: b must be positive");
  UtilityModel m(Family::Quadratic, b);
  m.hi_ = 1.0 / b;
  m.hi_open_ = true;
  return m;
}

UtilityModel UtilityModel::cara(double a) {
  if (a == 0.0 || !std::isfinite(a))
    throw input_error("cara utility: a must be finite and non-zero");
  return UtilityModel(Family::Cara, a);
}

UtilityModel UtilityModel::crra(double gamma) {
  if (!std::isfinite(gamma)) throw input_error("crra utility: bad gamma");
  UtilityModel m(Family::Crra, gamma);
  m.lo_ = 0.0;
  m.lo_open_ = true;
  return m;
}

UtilityModel UtilityModel::piecewise_linear(
    std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2)
    throw input_error("piecewise utility: need at least 2 knots");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first))
      throw input_error("piecewise utility: knot abscissae must be strictly increasing");
    if (!(knots[i].second > knots[i - 1].second))
      throw input_error("piecewise utility: values must be strictly increasing");
  }
  UtilityModel m(Family::PiecewiseLinear, 0.0);
  m.knots_ = std::move(knots);
  m.lo_ = m.knots_.front().first;
  m.hi_ = m.knots_.back().first;
  return m;
}

bool UtilityModel::in_domain(double x) const {
  if (!std::isfinite(x)) return false;
  if (lo_open_ ? x <= lo_ : x < lo_) return false;
  if (hi_open_ ? x >= hi_ : x > hi_) return false;
  return true;
}

void UtilityModel::check_domain(double x) const {
  if (!in_domain(x))
    throw input_error("utility: x = " + fmt_g17(x) + " outside domain (" +
                      fmt_g17(lo_) + ", " + fmt_g17(hi_) + ")");
}

double UtilityModel::base_value(double x) const {
  switch (family_) {
    case Family::Linear: return x;
    case Family::Quadratic: return x - param_ * x * x / 2.0;
    case Family::Cara: return (1.0 - std::exp(-param_ * x)) / param_;
    case Family::Crra:
      if (std::abs(param_ - 1.0) <= 1e-12) return std::log(x);
      return std::pow(x, 1.0 - param_) / (1.0 - param_);
    case Family::PiecewiseLinear: return pwl_interp(knots_, x);
  }
  return kNan;
}

double UtilityModel::base_d1(double x) const {
  switch (family_) {
    case Family::Linear: return 1.0;
    case Family::Quadratic: return 1.0 - param_ * x;
    case Family::Cara: return std::exp(-param_ * x);
    case Family::Crra: return std::pow(x, -param_);
    case Family::PiecewiseLinear: {
      bool at_knot = false;
      const double s = pwl_slope(knots_, x, &at_knot);
      if (at_knot)
        throw input_error("utility: derivative queried at a kink, x = " +
                          fmt_g17(x));
      return s;
    }
  }
  return kNan;
}

double UtilityModel::base_d2(double x) const {
  switch (family_) {
    case Family::Linear: return 0.0;
    case Family::Quadratic: return -param_;
    case Family::Cara: return -param_ * std::exp(-param_ * x);
    case Family::Crra: return -param_ * std::pow(x, -param_ - 1.0);
    case Family::PiecewiseLinear: {
      bool at_knot = false;
      (void)pwl_slope(knots_, x, &at_knot);
      if (at_knot)
        throw input_error("utility: second derivative queried at a kink, x = " +
                          fmt_g17(x));
      return 0.0;
    }
  }
  return kNan;
}

double UtilityModel::value(double x) const {
  check_domain(x);
  return scale_ * base_value(x) + shift_;
}

double UtilityModel::d1(double x) const {
  check_domain(x);
  return scale_ * base_d1(x);
}

double UtilityModel::d2(double x) const {
  check_domain(x);
  return scale_ * base_d2(x);
}

UtilityModel UtilityModel::affine(double scale, double shift) const {
  if (!(scale > 0.0))
    throw input_error("utility affine transform: scale must be positive");
  UtilityModel m = *this;
  m.scale_ = scale_ * scale;
  m.shift_ = scale * shift_ + shift;
  return m;
}

// ---------------------------------------------------------------------------

WeightingModel::WeightingModel(Family f, double a, double b)
    : family_(f), a_(a), b_(b) {}

WeightingModel WeightingModel::identity() {
  return WeightingModel(Family::Identity, 0.0, 0.0);
}

WeightingModel WeightingModel::power(double theta) {
  if (!(theta > 0.0)) throw input_error("power weighting: theta must be positive");
  return WeightingModel(Family::Power, theta, 0.0);
}

WeightingModel WeightingModel::quadratic() {
  return WeightingModel(Family::Quadratic, 0.0, 0.0);
}

WeightingModel WeightingModel::prelec(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw input_error("prelec weighting: alpha and beta must be positive");
  return WeightingModel(Family::Prelec, alpha, beta);
}

WeightingModel WeightingModel::tversky_kahneman(double gamma) {
  if (!(gamma > 0.0)) throw input_error("tk weighting: gamma must be positive");
  WeightingModel m(Family::TverskyKahneman, gamma, 0.0);
  // small gamma makes this family non-monotone
  double prev = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double h = m.value(i / 1000.0);
    if (h < prev - 1e-12)
      throw input_error("tk weighting: not non-decreasing for gamma = " +
                        fmt_g17(gamma));
    prev = h;
  }
  return m;
}

WeightingModel WeightingModel::avar_kink(double p0) {
  if (!(p0 > 0.0 && p0 < 1.0))
    throw input_error("avar weighting: p0 must lie in (0,1)");
  return WeightingModel(Family::AvarKink, p0, 0.0);
}

WeightingModel WeightingModel::piecewise_linear(
    std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2)
    throw input_error("piecewise weighting: need at least 2 knots");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first))
      throw input_error("piecewise weighting: knot abscissae must be strictly increasing");
    if (knots[i].second < knots[i - 1].second - 1e-12)
      throw input_error("piecewise weighting: values must be non-decreasing");
  }
  if (std::abs(knots.front().first) > 1e-12 ||
      std::abs(knots.front().second) > 1e-12 ||
      std::abs(knots.back().first - 1.0) > 1e-12 ||
      std::abs(knots.back().second - 1.0) > 1e-12)
    throw input_error("piecewise weighting: must map (0,0) to (1,1)");
  WeightingModel m(Family::PiecewiseLinear, 0.0, 0.0);
  m.knots_ = std::move(knots);
  return m;
}

WeightingModel WeightingModel::compose(WeightingModel outer, WeightingModel inner) {
  if (!outer.kinks().empty())
    throw input_error("compose: outer weighting must be smooth on (0,1)");
  WeightingModel m(Family::Composed, 0.0, 0.0);
  m.outer_ = std::make_shared<const WeightingModel>(std::move(outer));
  m.inner_ = std::make_shared<const WeightingModel>(std::move(inner));
  return m;
}

void WeightingModel::check_p(double& p) const {
  if (!std::isfinite(p)) throw input_error("weighting: non-finite probability");
  if (p < 0.0) {
    if (p < -kKinkTol)
      throw input_error("weighting: p = " + fmt_g17(p) + " outside [0,1]");
    p = 0.0;
  } else if (p > 1.0) {
    if (p > 1.0 + kKinkTol)
      throw input_error("weighting: p = " + fmt_g17(p) + " outside [0,1]");
    p = 1.0;
  }
}

void WeightingModel::check_interior_for_derivative(double p) const {
  if (p < kEndpointGuard || p > 1.0 - kEndpointGuard)
    throw input_error(
        "weighting: derivative query within 1e-9 of an endpoint, p = " +
        fmt_g17(p));
}

double WeightingModel::value(double p) const {
  check_p(p);
  switch (family_) {
    case Family::Identity: return p;
    case Family::Power: return std::pow(p, a_);
    case Family::Quadratic: return 2.0 * p - p * p;
    case Family::Prelec:
      if (p == 0.0) return 0.0;
      if (p == 1.0) return 1.0;
      return std::exp(-b_ * std::pow(-std::log(p), a_));
    case Family::TverskyKahneman: {
      if (p == 0.0) return 0.0;
      if (p == 1.0) return 1.0;
      const double num = std::pow(p, a_);
      const double den = num + std::pow(1.0 - p, a_);
      return num / std::pow(den, 1.0 / a_);
    }
    case Family::AvarKink: {
      const double kink = 1.0 - a_;
      return p <= kink ? p / (1.0 - a_) : 1.0;
    }
    case Family::PiecewiseLinear: return pwl_interp(knots_, p);
    case Family::Composed: return outer_->value(inner_->value(p));
  }
  return kNan;
}

double WeightingModel::d1(double p) const {
  check_p(p);
  switch (family_) {
    case Family::Identity: return 1.0;
    case Family::Power:
      check_interior_for_derivative(p);
      return a_ * std::pow(p, a_ - 1.0);
    case Family::Quadratic: return 2.0 - 2.0 * p;
    case Family::Prelec: {
      check_interior_for_derivative(p);
      const double L = -std::log(p);
      return a_ * b_ / p * std::pow(L, a_ - 1.0) *
             std::exp(-b_ * std::pow(L, a_));
    }
    case Family::TverskyKahneman: {
      check_interior_for_derivative(p);
      const double g = a_;
      const double A = std::pow(p, g), B = std::pow(1.0 - p, g);
      const double Ad = g * std::pow(p, g - 1.0);
      const double Bd = -g * std::pow(1.0 - p, g - 1.0);
      const double S = A + B, Sd = Ad + Bd;
      return Ad * std::pow(S, -1.0 / g) -
             (1.0 / g) * A * Sd * std::pow(S, -1.0 / g - 1.0);
    }
    case Family::AvarKink: {
      const double kink = 1.0 - a_;
      if (std::abs(p - kink) <= kKinkTol)
        throw input_error("weighting: derivative queried at the kink p = " +
                          fmt_g17(kink));
      return p < kink ? 1.0 / (1.0 - a_) : 0.0;
    }
    case Family::PiecewiseLinear: {
      bool at_knot = false;
      const double s = pwl_slope(knots_, p, &at_knot);
      if (at_knot)
        throw input_error("weighting: derivative queried at a kink, p = " +
                          fmt_g17(p));
      return s;
    }
    case Family::Composed:
      return outer_->d1(inner_->value(p)) * inner_->d1(p);
  }
  return kNan;
}

double WeightingModel::d2(double p) const {
  check_p(p);
  switch (family_) {
    case Family::Identity: return 0.0;
    case Family::Power:
      check_interior_for_derivative(p);
      return a_ * (a_ - 1.0) * std::pow(p, a_ - 2.0);
    case Family::Quadratic: return -2.0;
    case Family::Prelec: {
      check_interior_for_derivative(p);
      const double L = -std::log(p);
      return a_ * b_ / (p * p) * std::exp(-b_ * std::pow(L, a_)) *
             std::pow(L, a_ - 2.0) *
             ((1.0 - a_) - L + a_ * b_ * std::pow(L, a_));
    }
    case Family::TverskyKahneman: {
      check_interior_for_derivative(p);
      const double g = a_;
      const double A = std::pow(p, g), B = std::pow(1.0 - p, g);
      const double Ad = g * std::pow(p, g - 1.0);
      const double Bd = -g * std::pow(1.0 - p, g - 1.0);
      const double Add = g * (g - 1.0) * std::pow(p, g - 2.0);
      const double Bdd = g * (g - 1.0) * std::pow(1.0 - p, g - 2.0);
      const double S = A + B, Sd = Ad + Bd, Sdd = Add + Bdd;
      return Add * std::pow(S, -1.0 / g) -
             (1.0 / g) * std::pow(S, -1.0 / g - 1.0) * (2.0 * Ad * Sd + A * Sdd) +
             (1.0 / g) * (1.0 / g + 1.0) * A * Sd * Sd *
                 std::pow(S, -1.0 / g - 2.0);
    }
    case Family::AvarKink: {
      const double kink = 1.0 - a_;
      if (std::abs(p - kink) <= kKinkTol)
        throw input_error("weighting: derivative queried at the kink p = " +
                          fmt_g17(kink));
      return 0.0;
    }
    case Family::PiecewiseLinear: {
      bool at_knot = false;
      (void)pwl_slope(knots_, p, &at_knot);
      if (at_knot)
        throw input_error("weighting: second derivative queried at a kink, p = " +
                          fmt_g17(p));
      return 0.0;
    }
    case Family::Composed: {
      const double ip = inner_->value(p);
      const double id1 = inner_->d1(p);
      return outer_->d2(ip) * id1 * id1 + outer_->d1(ip) * inner_->d2(p);
    }
  }
  return kNan;
}

std::pair<double, double> WeightingModel::one_sided(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw input_error("weighting: one-sided derivatives need p in (0,1)");
  switch (family_) {
    case Family::AvarKink: {
      const double kink = 1.0 - a_;
      if (std::abs(p - kink) <= kKinkTol)
        return {1.0 / (1.0 - a_), 0.0};
      const double s = p < kink ? 1.0 / (1.0 - a_) : 0.0;
      return {s, s};
    }
    case Family::PiecewiseLinear: return pwl_one_sided(knots_, p);
    case Family::Composed: {
      const double outer_slope = outer_->d1(inner_->value(p));
      auto [l, r] = inner_->one_sided(p);
      return {outer_slope * l, outer_slope * r};
    }
    default: {
      const double s = d1(p);
      return {s, s};
    }
  }
}

std::vector<double> WeightingModel::kinks() const {
  switch (family_) {
    case Family::AvarKink: return {1.0 - a_};
    case Family::PiecewiseLinear: {
      std::vector<double> ks;
      for (std::size_t i = 1; i + 1 < knots_.size(); ++i)
        ks.push_back(knots_[i].first);
      return ks;
    }
    case Family::Composed: return inner_->kinks();
    default: return {};
  }
}

bool WeightingModel::smooth_at(double p) const {
  for (double k : kinks())
    if (std::abs(p - k) <= kKinkTol) return false;
  return true;
}

LocalIndexes local_indexes(const UtilityModel& u, const WeightingModel& h,
                           double w0, double p0) {
  return {-u.d2(w0) / u.d1(w0), -h.d2(p0) / h.d1(p0)};
}

// ---------------------------------------------------------------------------

namespace {
double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw input_error("model spec: bad number '" + text + "' for " + what);
  return v;
}

std::map<std::string, double> parse_params(const std::string& text,
                                           const std::string& family) {
  std::map<std::string, double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw input_error("model spec: expected key=value in '" + item +
                        "' for family " + family);
    out[item.substr(0, eq)] = parse_number(item.substr(eq + 1), family);
    pos = comma + 1;
  }
  return out;
}

double take(std::map<std::string, double>& params, const std::string& key,
            const std::string& family) {
  auto it = params.find(key);
  if (it == params.end())
    throw input_error("model spec: family " + family + " needs " + key + "=");
  const double v = it->second;
  params.erase(it);
  return v;
}

void expect_empty(const std::map<std::string, double>& params,
                  const std::string& family) {
  if (!params.empty())
    throw input_error("model spec: unknown parameter '" + params.begin()->first +
                      "' for family " + family);
}
}  // namespace

UtilityModel parse_utility(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string family = text.substr(0, colon);
  auto params = parse_params(
      colon == std::string::npos ? "" : text.substr(colon + 1), family);
  if (family == "linear") {
    expect_empty(params, family);
    return UtilityModel::linear();
  }
  if (family == "quadratic") {
    const double b = take(params, "b", family);
    expect_empty(params, family);
    return UtilityModel::quadratic(b);
  }
  if (family == "cara") {
    const double a = take(params, "a", family);
    expect_empty(params, family);
    return UtilityModel::cara(a);
  }
  if (family == "crra") {
    const double g = take(params, "gamma", family);
    expect_empty(params, family);
    return UtilityModel::crra(g);
  }
  throw input_error("model spec: unknown utility family '" + family + "'");
}

WeightingModel parse_weighting(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string family = text.substr(0, colon);
  auto params = parse_params(
      colon == std::string::npos ? "" : text.substr(colon + 1), family);
  if (family == "identity") {
    expect_empty(params, family);
    return WeightingModel::identity();
  }
  if (family == "power") {
    const double t = take(params, "theta", family);
    expect_empty(params, family);
    return WeightingModel::power(t);
  }
  if (family == "quadw") {
    expect_empty(params, family);
    return WeightingModel::quadratic();
  }
  if (family == "prelec") {
    const double a = take(params, "alpha", family);
    const double b = take(params, "beta", family);
    expect_empty(params, family);
    return WeightingModel::prelec(a, b);
  }
  if (family == "tk") {
    const double g = take(params, "gamma", family);
    expect_empty(params, family);
    return WeightingModel::tversky_kahneman(g);
  }
  if (family == "avar") {
    const double p0 = take(params, "p0", family);
    expect_empty(params, family);
    return WeightingModel::avar_kink(p0);
  }
  throw input_error("model spec: unknown weighting family '" + family + "'");
}

}  // namespace probprem
