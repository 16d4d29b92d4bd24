#include "probprem/lottery.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "probprem/errors.hpp"
#include "probprem/format.hpp"

namespace probprem {

namespace {
constexpr double kMergeTol = 1e-12;
constexpr double kMassTol = 1e-12;
}  // namespace

Lottery::Lottery(std::vector<Atom> atoms) {
  if (atoms.empty()) throw input_error("lottery: empty atom list");
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.payoff) || !std::isfinite(a.prob))
      throw input_error("lottery: non-finite atom");
    if (a.prob < 0.0 || a.prob > 1.0 + kMassTol)
      throw input_error("lottery: probability " + fmt_g17(a.prob) +
                        " out of range at payoff " + fmt_g17(a.payoff));
  }
  std::erase_if(atoms, [](const Atom& a) { return a.prob == 0.0; });
  if (atoms.empty()) throw input_error("lottery: all probabilities zero");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.payoff < b.payoff; });

  for (const Atom& a : atoms) {
    if (atoms_.empty() || a.payoff - atoms_.back().payoff > kMergeTol)
      atoms_.push_back(a);
    else
      atoms_.back().prob += a.prob;
  }

  double total = 0.0;
  for (const Atom& a : atoms_) total += a.prob;
  if (std::abs(total - 1.0) > kMassTol)
    throw input_error("lottery: probabilities sum to " + fmt_g17(total) +
                      ", expected 1");
}

std::string Lottery::to_json() const {
  JsonArray arr;
  for (const Atom& a : atoms_) {
    JsonArray pair;
    pair.push(a.payoff).push(a.prob);
    arr.push_raw(pair.str());
  }
  return JsonObject().field_raw("atoms", arr.str()).str();
}

Lottery Lottery::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("lottery: bad JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
    throw input_error("lottery: expected {\"atoms\": [[payoff, prob], ...]}");
  std::vector<Atom> atoms;
  for (const auto& entry : j["atoms"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_number())
      throw input_error("lottery: each atom must be a [payoff, prob] pair");
    atoms.push_back({entry[0].get<double>(), entry[1].get<double>()});
  }
  return Lottery(atoms);
}

double mean(const Lottery& l) {
  double m = 0.0;
  for (const Atom& a : l.atoms()) m += a.prob * a.payoff;
  return m;
}

double variance(const Lottery& l) {
  const double m = mean(l);
  double v = 0.0;
  for (const Atom& a : l.atoms()) v += a.prob * (a.payoff - m) * (a.payoff - m);
  return v;
}

double maxiance(const Lottery& l) {
  const double m = mean(l);
  const auto& atoms = l.atoms();
  const std::size_t n = atoms.size();
  double acc = 0.0;
  double f_prev = 0.0;
  double f = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    f = (i + 1 == n) ? 1.0 : f + atoms[i].prob;
    acc += (atoms[i].payoff - m) * (f * f - f_prev * f_prev);
    f_prev = f;
  }
  return acc;
}

double miniance(const Lottery& l) {
  const double m = mean(l);
  const auto& atoms = l.atoms();
  const std::size_t n = atoms.size();
  // survival probabilities at and above each payoff, accumulated from the top
  double e_min = 0.0;
  double s_next = 0.0;  // P(X >= x_{i+1})
  for (std::size_t i = n; i-- > 0;) {
    const double s = (i == 0) ? 1.0 : s_next + atoms[i].prob;
    e_min += atoms[i].payoff * (s * s - s_next * s_next);
    s_next = s;
  }
  return e_min - m;
}

namespace {
// E[(t - X)^+]: the integrated CDF at t.
double expected_shortfall_below(const Lottery& l, double t) {
  double acc = 0.0;
  for (const Atom& a : l.atoms())
    if (a.payoff < t) acc += a.prob * (t - a.payoff);
  return acc;
}
}  // namespace

bool is_mps(const Lottery& coarse, const Lottery& fine) {
  if (std::abs(mean(coarse) - mean(fine)) > 1e-10) return false;
  std::set<double> knots;
  double scale = 1.0;
  for (const Atom& a : coarse.atoms()) {
    knots.insert(a.payoff);
    scale = std::max(scale, std::abs(a.payoff));
  }
  for (const Atom& a : fine.atoms()) {
    knots.insert(a.payoff);
    scale = std::max(scale, std::abs(a.payoff));
  }
  const double tol = 1e-12 * scale;
  for (double t : knots) {
    if (expected_shortfall_below(fine, t) >
        expected_shortfall_below(coarse, t) + tol)
      return false;
  }
  return true;
}

SpreadSpec::SpreadSpec(double w0_, double p0_, double eps1_, double eps2_)
    : w0(w0_), p0(p0_), eps1(eps1_), eps2(eps2_) {
  if (!std::isfinite(w0) || !std::isfinite(p0) || !std::isfinite(eps1) ||
      !std::isfinite(eps2))
    throw input_error("spread: non-finite parameter");
  if (!(p0 > 0.0 && p0 < 1.0))
    throw input_error("spread: p0 = " + fmt_g17(p0) + " must lie in (0,1)");
  if (!(eps2 > 0.0))
    throw input_error("spread: eps2 = " + fmt_g17(eps2) + " must be positive");
  if (!(eps1 > 0.0 && eps1 <= std::min(p0, 1.0 - p0)))
    throw input_error("spread: eps1 = " + fmt_g17(eps1) +
                      " must lie in (0, min(p0, 1-p0)]");
}

Lottery make_c(const SpreadSpec& s) {
  return Lottery({{s.w0 - s.eps2, s.p0}, {s.w0 + s.eps2, 1.0 - s.p0}});
}

Lottery make_d(const SpreadSpec& s) {
  return Lottery({{s.w0 - s.eps2, s.p0 - s.eps1},
                  {s.w0, 2.0 * s.eps1},
                  {s.w0 + s.eps2, 1.0 - s.p0 - s.eps1}});
}

Lottery make_c_mu(const SpreadSpec& s, double mu) {
  if (!(mu >= -(1.0 - s.p0) && mu <= s.p0))
    throw input_error("make_c_mu: mu = " + fmt_g17(mu) +
                      " leaves [-(1-p0), p0]");
  return Lottery({{s.w0 - s.eps2, s.p0 - mu}, {s.w0 + s.eps2, 1.0 - s.p0 + mu}});
}

Lottery make_a(double eps1, double loss, double w0) {
  if (!(loss > 0.0)) throw input_error("make_a: loss must be positive");
  if (!(eps1 > 0.0 && eps1 < 1.0))
    throw input_error("make_a: eps1 must lie in (0,1)");
  return Lottery({{w0 - loss, eps1}, {w0, 1.0 - eps1}});
}

Lottery make_a_star(double eps1, double m, double loss, double w0) {
  if (!(m >= 0.0 && m < 1.0)) throw input_error("make_a_star: m must lie in [0,1)");
  if (!(loss > 0.0)) throw input_error("make_a_star: loss must be positive");
  if (!(eps1 > 0.0 && eps1 < 1.0))
    throw input_error("make_a_star: eps1 must lie in (0,1)");
  const double q = (1.0 - m) * eps1;
  return Lottery({{w0 - loss, q}, {w0, 1.0 - q}});
}

Lottery make_b_n(int n, double eps1, double loss, double w0) {
  if (n < 2) throw input_error("make_b_n: n must be at least 2");
  if (!(loss > 0.0)) throw input_error("make_b_n: loss must be positive");
  if (!(eps1 > 0.0) || !(n * eps1 < 1.0))
    throw input_error("make_b_n: pooled loss probability n*eps1 = " +
                      fmt_g17(n * eps1) + " must lie in (0,1)");
  return Lottery({{w0 - loss / n, n * eps1}, {w0, 1.0 - n * eps1}});
}

NStateSpread::NStateSpread(std::vector<double> payoffs_, double eps1_,
                           double p0_, double w0_)
    : payoffs(std::move(payoffs_)), eps1(eps1_), p0(p0_), w0(w0_) {
  if (payoffs.size() < 2) throw input_error("nstate: need at least 2 states");
  for (double x : payoffs)
    if (!std::isfinite(x)) throw input_error("nstate: non-finite payoff");
  if (!std::isfinite(w0)) throw input_error("nstate: non-finite w0");
  std::sort(payoffs.begin(), payoffs.end());
  double sum = 0.0;
  for (double x : payoffs) sum += x;
  if (std::abs(sum) > 1e-12)
    throw input_error("nstate: payoffs sum to " + fmt_g17(sum) +
                      ", expected 0");
  n1 = 0;
  for (double x : payoffs)
    if (x < 0.0) ++n1;
  n2 = n() - n1;
  if (n1 < 1 || n2 < 1)
    throw input_error(
        "nstate: need at least one negative and one non-negative payoff");
  if (!(eps1 > 0.0 && eps1 <= 0.5))
    throw input_error("nstate: eps1 = " + fmt_g17(eps1) +
                      " must lie in (0, 1/2]");
  if (!(p0 > 0.0 && p0 < 1.0) || eps1 > std::min(p0, 1.0 - p0))
    throw input_error("nstate: band [p0-eps1, p0+eps1] must fit inside [0,1]");
}

SpreadMoments spread_moments(const SpreadSpec& s) {
  SpreadMoments m;
  m.m2 = 2.0 * s.eps1 * s.eps2 * s.eps2;
  m.mbar2 = 2.0 * s.eps1 * s.eps1 * s.eps2;
  m.py = 2.0 * s.eps2;
  m.pr = 2.0 * s.eps1;
  m.py_star = m.py;
  return m;
}

SpreadMoments spread_moments(const NStateSpread& s) {
  const int n = s.n();
  double sum_sq = 0.0, sum_rank = 0.0, sum_abs = 0.0;
  double abs_neg = 0.0, abs_pos = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.payoffs[i];
    sum_sq += x * x;
    sum_rank += (2.0 * (i + 1) - 1.0) * x;
    sum_abs += std::abs(x);
    if (i < s.n1)
      abs_neg += std::abs(x);
    else
      abs_pos += std::abs(x);
  }
  SpreadMoments m;
  m.m2 = 2.0 * s.eps1 / n * sum_sq;
  m.mbar2 = 4.0 * s.eps1 * s.eps1 / (static_cast<double>(n) * n) * sum_rank;
  m.py = sum_abs;
  m.pr = 2.0 * s.eps1;
  m.py_star = abs_neg + static_cast<double>(s.n1) / s.n2 * abs_pos;
  return m;
}

}  // namespace probprem
