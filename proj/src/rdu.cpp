#include "probprem/rdu.hpp"

#include <cmath>

#include "probprem/errors.hpp"
#include "probprem/format.hpp"

namespace probprem {

namespace {
void check_support(const Lottery& l, const UtilityModel& u) {
  for (const Atom& a : l.atoms())
    if (!u.in_domain(a.payoff))
      throw input_error("rdu: payoff " + fmt_g17(a.payoff) +
                        " outside the utility domain");
}
}  // namespace

double evaluate(const Lottery& l, const UtilityModel& u, const WeightingModel& h) {
  check_support(l, u);
  const auto& atoms = l.atoms();
  const std::size_t n = atoms.size();
  double acc = 0.0;
  double f = 0.0;
  double h_prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    f = (i + 1 == n) ? 1.0 : f + atoms[i].prob;
    const double h_cur = h.value(f);
    acc += (h_cur - h_prev) * u.value(atoms[i].payoff);
    h_prev = h_cur;
  }
  return acc;
}

double evaluate_dual(const Lottery& l, const UtilityModel& u,
                     const WeightingModel& h) {
  check_support(l, u);
  const auto& atoms = l.atoms();
  const std::size_t n = atoms.size();
  const auto hbar = [&h](double p) { return 1.0 - h.value(1.0 - p); };
  double acc = 0.0;
  double tail_next = 0.0;  // P(X >= x_{i+1})
  double hbar_next = hbar(0.0);
  for (std::size_t i = n; i-- > 0;) {
    const double tail = (i == 0) ? 1.0 : tail_next + atoms[i].prob;
    const double hbar_cur = hbar(tail);
    acc += (hbar_cur - hbar_next) * u.value(atoms[i].payoff);
    tail_next = tail;
    hbar_next = hbar_cur;
  }
  return acc;
}

double certainty_equivalent(const Lottery& l, const UtilityModel& u,
                            const WeightingModel& h) {
  const double target = evaluate(l, u, h);
  double lo = l.min_payoff();
  double hi = l.max_payoff();
  if (lo == hi) return lo;
  if (u.value(lo) >= target) return lo;
  if (u.value(hi) <= target) return hi;
  const double tol = 1e-13 * std::max(1.0, std::abs(lo) + std::abs(hi));
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    (u.value(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace probprem
