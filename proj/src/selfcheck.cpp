#include "probprem/selfcheck.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "probprem/attitude.hpp"
#include "probprem/comparative.hpp"
#include "probprem/format.hpp"
#include "probprem/lottery.hpp"
#include "probprem/premium.hpp"
#include "probprem/rdu.hpp"
#include "probprem/roots.hpp"
#include "probprem/sharing.hpp"

namespace probprem {

namespace {

double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
double uniform(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * unit(rng);
}

// brute-force second dual moment: E[max of two independent copies] - mean
double maxiance_double_sum(const Lottery& l) {
  double e_max = 0.0, m = 0.0;
  for (const Atom& a : l.atoms()) {
    m += a.prob * a.payoff;
    for (const Atom& b : l.atoms()) e_max += a.prob * b.prob * std::max(a.payoff, b.payoff);
  }
  return e_max - m;
}

// 1: exact solver against the explicit expected-utility reduction
bool check_eu_closed_form(std::string& detail, std::ostream& err) {
  const UtilityModel u = UtilityModel::crra(1.0);
  const WeightingModel h = WeightingModel::identity();
  const SpreadSpec spec(10.0, 0.5, 0.25, 1.0);

  const auto t0 = std::chrono::steady_clock::now();
  const PremiumReport r = probability_premium_exact(spec, u, h);
  const auto t1 = std::chrono::steady_clock::now();
  double best_us = std::chrono::duration<double, std::micro>(t1 - t0).count();
  for (int rep = 0; rep < 2; ++rep) {
    const auto a = std::chrono::steady_clock::now();
    (void)probability_premium_exact(spec, u, h);
    const auto b = std::chrono::steady_clock::now();
    best_us = std::min(best_us, std::chrono::duration<double, std::micro>(b - a).count());
  }
  err << "criterion 1 solve time: " << best_us << " us\n";

  const double num = 2.0 * std::log(10.0) - std::log(9.0) - std::log(11.0);
  const double den = std::log(11.0) - std::log(9.0);
  const double closed = 0.25 * num / den;

  detail = "mu=" + fmt_g17(r.mu_exact);
  return std::abs(r.mu_exact - closed) <= 1e-12 &&
         std::abs(r.mu_exact - 0.0125208) <= 1e-6 && best_us < 1000.0;
}

// 2: dual-theory premium with quadratic weighting has a closed form
bool check_dt_quadratic(std::string& detail) {
  const PremiumReport r =
      probability_premium_dt_exact(0.5, 0.1, WeightingModel::quadratic());
  const double expected = std::sqrt(0.26) - 0.5;
  detail = "mu=" + fmt_g17(r.mu_exact) + " expected=" + fmt_g17(expected);
  return std::abs(r.mu_exact - expected) <= 1e-10;
}

// 3: |mu_exact - mu_approx| contracts by ~4 per halving of the leading
// approximation term (the error scales as that term squared)
bool check_approximation_order(std::string& detail) {
  const UtilityModel u = UtilityModel::crra(1.0);
  const WeightingModel h = WeightingModel::prelec(0.65, 1.0);
  const double w0 = 10.0, p0 = 0.4;
  std::vector<double> errs, doms;
  for (int k = 0; k <= 5; ++k) {
    const double e1 = 0.1 * std::pow(2.0, -k);
    const double e2 = 1.0 * std::pow(2.0, -k);
    const SpreadSpec spec(w0, p0, e1, e2);
    const PremiumReport r = probability_premium_exact(spec, u, h);
    errs.push_back(std::abs(r.mu_exact - r.mu_approx_total));
    doms.push_back(std::max(std::abs(r.mu_approx_eu_term),
                            std::abs(r.mu_approx_dt_term)));
  }
  bool ok = true;
  double worst = 4.0;
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
    const double err_ratio = errs[k] / errs[k + 1];
    const double dom_halvings = std::log2(doms[k] / doms[k + 1]);
    const double per_halving = std::pow(err_ratio, 1.0 / dom_halvings);
    if (std::abs(per_halving - 4.0) > std::abs(worst - 4.0)) worst = per_halving;
    if (!(per_halving >= 4.0 * 0.67 && per_halving <= 4.0 * 1.5)) ok = false;
  }
  detail = "per-halving ratio furthest from 4: " + fmt_g17(worst);
  return ok;
}

// 4: the moment form and the Taylor form are the same number
bool check_moment_form_identity(std::string& detail) {
  std::mt19937_64 rng(101);
  const UtilityModel us[] = {UtilityModel::crra(2.0), UtilityModel::cara(0.1),
                             UtilityModel::crra(1.0)};
  const WeightingModel hs[] = {WeightingModel::prelec(0.65, 1.0),
                               WeightingModel::quadratic(),
                               WeightingModel::tversky_kahneman(0.61)};
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double w0 = uniform(rng, 1.5, 20.0);
    const double p0 = uniform(rng, 0.1, 0.9);
    const double eps1 = uniform(rng, 0.05, 1.0) * std::min(p0, 1.0 - p0);
    const double eps2 = uniform(rng, 0.05, 1.0) * std::min(1.0, w0 - 0.5);
    const SpreadSpec spec(w0, p0, eps1, eps2);
    const UtilityModel& u = us[i % 3];
    const WeightingModel& h = hs[i % 3];
    const double a = probability_premium_approx(spec, u, h).total;
    const double b = probability_premium_moment_form(spec, u, h);
    worst = std::max(worst, std::abs(a - b));
  }
  detail = "worst |moment - taylor| = " + fmt_g17(worst);
  return worst <= 1e-14;
}

// 5: squared-CDF jump formula vs the two-draw double sum; footnote
// moment values for binary spreads
bool check_maxiance_oracle(std::string& detail) {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(unit(rng) * 12.0);
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      const double w = 0.05 + unit(rng);
      atoms.push_back({uniform(rng, -10.0, 10.0), w});
      total += w;
    }
    for (Atom& a : atoms) a.prob /= total;
    const Lottery l(atoms);
    worst = std::max(worst, std::abs(maxiance(l) - maxiance_double_sum(l)));
    if (maxiance(l) < 0.0 && l.size() > 1) return false;
  }
  for (int i = 0; i < 100; ++i) {
    const double e1 = uniform(rng, 0.01, 0.5);
    const double e2 = uniform(rng, 0.01, 5.0);
    const SpreadSpec spec(0.0, 0.5, std::min(e1, 0.5), e2);
    const SpreadMoments m = spread_moments(spec);
    if (m.m2 != 2.0 * spec.eps1 * spec.eps2 * spec.eps2) return false;
    if (m.mbar2 != 2.0 * spec.eps1 * spec.eps1 * spec.eps2) return false;
    if (m.py != 2.0 * spec.eps2 || m.pr != 2.0 * spec.eps1) return false;
  }
  detail = "worst |stieltjes - double sum| = " + fmt_g17(worst);
  return worst <= 1e-12;
}

bool is_first_order(AttitudeOrder o) {
  return o == AttitudeOrder::FirstOrderAverse ||
         o == AttitudeOrder::FirstOrderSeeking;
}
bool is_second_order(AttitudeOrder o) {
  return o == AttitudeOrder::SecondOrderAverse ||
         o == AttitudeOrder::SecondOrderSeeking;
}

// 6: smooth weighting alone is a second-order trait, curved utility
// makes the attitude first order (for almost every payoff scale)
bool check_order_theorem(std::string& detail) {
  std::mt19937_64 rng(303);
  const WeightingModel prelec = WeightingModel::prelec(0.65, 1.0);
  const WeightingModel quadw = WeightingModel::quadratic();
  const WeightingModel ident = WeightingModel::identity();
  const UtilityModel linear = UtilityModel::linear();
  const UtilityModel crra2 = UtilityModel::crra(2.0);

  for (int i = 0; i < 10; ++i) {
    const double p0 = uniform(rng, 0.15, 0.85);
    const double w0 = uniform(rng, 5.0, 15.0);
    const auto c = classify(w0, p0, 1.0, linear, quadw);
    if (c.order != AttitudeOrder::SecondOrderAverse) {
      detail = "linear+quadratic misclassified at p0=" + fmt_g17(p0);
      return false;
    }
  }
  for (int i = 0; i < 10; ++i) {
    double p0 = 0.0;
    do {
      p0 = uniform(rng, 0.15, 0.85);
    } while (std::abs(prelec.d2(p0) / prelec.d1(p0)) < 0.01);
    const double w0 = uniform(rng, 5.0, 15.0);
    const auto c = classify(w0, p0, 1.0, linear, prelec);
    if (!is_second_order(c.order)) {
      detail = "linear+prelec misclassified at p0=" + fmt_g17(p0);
      return false;
    }
  }
  for (const WeightingModel* h : {&ident, &prelec}) {
    for (int i = 0; i < 10; ++i) {
      const double p0 = uniform(rng, 0.15, 0.85);
      const double w0 = uniform(rng, 5.0, 15.0);
      int agree = 0;
      for (int j = 0; j < 5; ++j) {
        const double eps2 = uniform(rng, 0.2, 1.0);
        if (is_first_order(classify(w0, p0, eps2, crra2, *h).order)) ++agree;
      }
      if (agree < 4) {
        detail = "crra(2) not first order at p0=" + fmt_g17(p0);
        return false;
      }
    }
  }
  detail = "all 40 classification points agree";
  return true;
}

// 7: the classified first-order coefficient at a kink equals the
// one-sided slope formula
bool check_kink_theorem(std::string& detail) {
  const WeightingModel avar = WeightingModel::avar_kink(0.5);
  const double ks = kink_slope(avar, 0.5);
  const auto c = classify(10.0, 0.5, 1.0, UtilityModel::linear(), avar);
  if (std::abs(ks - 0.5) > 1e-12) return false;
  if (std::abs(c.first_coeff - ks) > 1e-4) {
    detail = "avar: first_coeff=" + fmt_g17(c.first_coeff);
    return false;
  }

  std::mt19937_64 rng(404);
  const double k = uniform(rng, 0.3, 0.7);
  const double v = k + (1.0 - k) * uniform(rng, 0.2, 0.8);  // averse kink
  const WeightingModel pwl =
      WeightingModel::piecewise_linear({{0.0, 0.0}, {k, v}, {1.0, 1.0}});
  const double ks2 = kink_slope(pwl, k);
  const auto c2 = classify(10.0, k, 1.0, UtilityModel::linear(), pwl);
  detail = "avar coeff=" + fmt_g17(c.first_coeff) +
           ", pwl coeff=" + fmt_g17(c2.first_coeff) + " vs slope=" + fmt_g17(ks2);
  return std::abs(c2.first_coeff - ks2) <= 1e-4;
}

// 8: a second-order DM shuns slightly unfair pooling for small loss
// probability; a first-order DM accepts it below the critical rate
bool check_risk_sharing(std::string& detail) {
  const double loss = 1.0, w0 = 10.0;
  for (int k = 0; k <= 8; ++k) {
    const double eps1 = 0.05 * std::pow(2.0, -k);
    if (prefers_pool(2, 0.05, eps1, loss, w0, UtilityModel::linear(),
                     WeightingModel::quadratic()) != -1) {
      detail = "pool still preferred at eps1=" + fmt_g17(eps1);
      return false;
    }
  }
  for (double eps1 : {1e-2, 1e-3, 1e-4}) {
    const double m_star = critical_m_pool(2, eps1, loss, w0,
                                          UtilityModel::crra(2.0),
                                          WeightingModel::identity());
    if (!(m_star > 0.0)) return false;
    if (prefers_pool(2, 0.5 * m_star, eps1, loss, w0, UtilityModel::crra(2.0),
                     WeightingModel::identity()) != 1) {
      detail = "pool rejected below critical m at eps1=" + fmt_g17(eps1);
      return false;
    }
  }
  detail = "both orders behave as predicted";
  return true;
}

// 9: index dominance implies premium dominance; a violated index pair
// yields a premium counterexample under localized search
bool check_comparative_theorem(std::string& detail) {
  const UtilityModel u1 = UtilityModel::crra(1.0);
  const UtilityModel u2 = UtilityModel::crra(2.0);
  const WeightingModel h1 = WeightingModel::prelec(0.9, 1.0);
  const WeightingModel h2 =
      WeightingModel::compose(WeightingModel::quadratic(), h1);

  const std::vector<double> x_grid = linspace(0.5, 20.0, 257);
  const std::vector<double> p_grid = linspace(0.01, 0.99, 257);
  const auto idx = check_index_dominance(u1, u2, h1, h2, x_grid, p_grid);
  if (!idx.holds) {
    detail = "index dominance unexpectedly fails";
    return false;
  }

  std::mt19937_64 rng(505);
  std::vector<SpreadSpec> specs;
  while (specs.size() < 500) {
    const double w0 = uniform(rng, 1.0, 15.0);
    const double p0 = uniform(rng, 0.05, 0.95);
    const double eps1 = uniform(rng, 0.05, 1.0) * std::min(p0, 1.0 - p0);
    const double eps2 = uniform(rng, 0.05, 0.95) * (w0 - 0.1);
    specs.emplace_back(w0, p0, eps1, eps2);
  }
  const auto prem = check_premium_dominance(u1, u2, h1, h2, specs);
  if (!prem.holds) {
    detail = "premium dominance fails, worst gap " + fmt_g17(prem.worst_gap);
    return false;
  }

  const auto idx_bad = check_index_dominance(u2, u1, h1, h1, x_grid, p_grid);
  if (idx_bad.holds) return false;
  const auto witness = find_premium_counterexample(u2, u1, h1, h1, idx_bad);
  if (!witness) {
    detail = "no counterexample found within 64 samples";
    return false;
  }
  detail = "dominance holds on 500 specs; counterexample at w0=" +
           fmt_g17(witness->w0);
  return true;
}

// 10: indifference curve against the budget line and the explicit
// expected-utility trace
bool check_indifference_curve(std::string& detail) {
  const double loss = 1.0, w0 = 10.0, p0 = 0.3;

  const auto grid = default_q_grid(p0);
  const auto neutral = trace_indifference(p0, loss, w0, UtilityModel::linear(),
                                          WeightingModel::identity(), grid);
  if (!neutral.skipped_q.empty()) return false;
  for (const TrianglePoint& pt : neutral.points)
    if (std::abs(pt.p - (p0 - pt.q / 2.0)) > 1e-12) {
      detail = "risk-neutral trace off the budget line at q=" + fmt_g17(pt.q);
      return false;
    }

  std::vector<double> fine = {0.0, 1e-4, 2e-4, 5e-4, 1e-3};
  for (double q : linspace(0.01, 0.5, 40)) fine.push_back(q);
  const auto second = trace_indifference(p0, loss, w0, UtilityModel::linear(),
                                         WeightingModel::quadratic(), fine);
  if (std::abs(second.slope_at_origin + 0.5) > 1e-4) {
    detail = "second-order slope " + fmt_g17(second.slope_at_origin);
    return false;
  }

  const UtilityModel logu = UtilityModel::crra(1.0);
  const auto eu = trace_indifference(p0, loss, w0, logu,
                                     WeightingModel::identity(), grid);
  const double rate = (std::log(w0 - loss / 2.0) - 0.5 * std::log(w0 - loss) -
                       0.5 * std::log(w0)) /
                      (std::log(w0) - std::log(w0 - loss));
  for (const TrianglePoint& pt : eu.points) {
    const double expected = p0 + pt.q * rate - pt.q / 2.0;
    if (std::abs(pt.p - expected) > 1e-9) {
      detail = "eu trace off the closed form at q=" + fmt_g17(pt.q);
      return false;
    }
  }
  detail = "slope_at_origin=" + fmt_g17(second.slope_at_origin);
  return true;
}

// 11: the n-state solver reduces to the binary solver and converges to
// the moment form at the predicted rate
bool check_nstate(std::string& detail) {
  const UtilityModel logu = UtilityModel::crra(1.0);
  const WeightingModel quadw = WeightingModel::quadratic();

  const NStateSpread two({-0.5, 0.5}, 0.1, 0.5, 10.0);
  const double mu_n = nstate_premium_exact(two, logu, quadw).mu_exact;
  const double mu_b =
      probability_premium_exact(SpreadSpec(10.0, 0.5, 0.1, 0.5), logu, quadw)
          .mu_exact;
  if (std::abs(mu_n - mu_b) > 1e-12) {
    detail = "binary reduction differs by " + fmt_g17(mu_n - mu_b);
    return false;
  }

  std::vector<double> errs;
  for (int k = 0; k <= 4; ++k) {
    const double scale = std::pow(2.0, -k);
    const NStateSpread spec(
        {-0.2 * scale, -0.1 * scale, 0.1 * scale, 0.2 * scale}, 0.1 * scale,
        0.5, 10.0);
    const PremiumReport r = nstate_premium_exact(spec, logu, quadw);
    errs.push_back(std::abs(r.mu_exact - r.mu_approx_total));
  }
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
    const double ratio = errs[k] / errs[k + 1];
    if (!(ratio >= 8.0 * 0.67)) {
      detail = "convergence ratio " + fmt_g17(ratio) + " below the cubic rate";
      return false;
    }
  }
  detail = "n=2 reduction exact; n=4 ratios >= " + fmt_g17(8.0 * 0.67);
  return true;
}

// 12: mu Py - lambda Pr vanishes in the small-risk limit
bool check_premium_link(std::string& detail) {
  const UtilityModel logu = UtilityModel::crra(1.0);
  const WeightingModel ident = WeightingModel::identity();
  double prev = std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (int k = 0; k <= 5; ++k) {
    const double e1 = 0.25 * std::pow(2.0, -k);
    const double e2 = 1.0 * std::pow(2.0, -k);
    const SpreadSpec spec(10.0, 0.5, e1, e2);
    const double res = std::abs(premium_link_residual(spec, logu, ident));
    last = res / (e1 * e2);
    if (!(last < prev)) {
      detail = "normalized residual not decreasing at k=" + std::to_string(k);
      return false;
    }
    prev = last;
  }
  detail = "final normalized residual = " + fmt_g17(last);
  return last < 1e-3;
}

}  // namespace

bool run_acceptance(std::ostream& out, std::ostream& err) {
  const auto t_start = std::chrono::steady_clock::now();
  int passed = 0, failed = 0;
  const auto report = [&](int idx, const char* name, bool ok,
                          const std::string& detail) {
    out << (ok ? "PASS" : "FAIL") << "  " << idx << "  " << name;
    if (!detail.empty()) out << "  [" << detail << "]";
    out << "\n";
    (ok ? passed : failed) += 1;
  };
  const auto run = [&](int idx, const char* name, auto&& fn) {
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    report(idx, name, ok, detail);
  };

  run(1, "eu-closed-form-premium",
      [&](std::string& d) { return check_eu_closed_form(d, err); });
  run(2, "dt-quadratic-premium", check_dt_quadratic);
  run(3, "approximation-order", check_approximation_order);
  run(4, "moment-form-identity", check_moment_form_identity);
  run(5, "maxiance-oracle", check_maxiance_oracle);
  run(6, "attitude-order", check_order_theorem);
  run(7, "kink-first-order", check_kink_theorem);
  run(8, "risk-sharing", check_risk_sharing);
  run(9, "comparative-dominance", check_comparative_theorem);
  run(10, "indifference-curve", check_indifference_curve);
  run(11, "nstate-premium", check_nstate);
  run(12, "premium-link", check_premium_link);

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  err << "acceptance suite wall time: " << secs << " s\n";
  const bool in_time = secs < 5.0;
  report(13, "suite-under-5s", in_time, "");

  out << (failed == 0 ? "all criteria passed" : "criteria failed") << " ("
      << passed << " passed, " << failed << " failed)\n";
  return failed == 0;
}

}  // namespace probprem
