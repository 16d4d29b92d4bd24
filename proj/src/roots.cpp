#include "probprem/roots.hpp"

#include <cmath>

#include "probprem/errors.hpp"
#include "probprem/format.hpp"

namespace probprem {

namespace {
struct Candidate {
  double root;
  double f_root;
  double lo, hi;
};
}  // namespace

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw input_error("linspace: need at least 2 points");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  out.back() = hi;
  return out;
}

RootResult scan_bisect(const std::function<double(double)>& f, double lo,
                       double hi, const SolverOptions& opts) {
  if (!(lo < hi)) throw input_error("scan_bisect: empty bracket");
  const int n = opts.scan_points;
  int evals = 0;
  std::vector<double> ts(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) {
    ts[i] = lo + (hi - lo) * static_cast<double>(i) / n;
    fs[i] = f(ts[i]);
    ++evals;
  }
  ts.back() = hi;

  std::vector<Candidate> candidates;
  for (int i = 0; i <= n; ++i)
    if (fs[i] == 0.0) candidates.push_back({ts[i], 0.0, ts[i], ts[i]});

  for (int i = 0; i < n; ++i) {
    if (!(fs[i] * fs[i + 1] < 0.0)) continue;
    double a = ts[i], b = ts[i + 1];
    double fa = fs[i];
    int iter = 0;
    while (b - a > 2.0 * opts.tol && iter < opts.max_iterations) {
      const double mid = 0.5 * (a + b);
      const double fm = f(mid);
      ++evals;
      ++iter;
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if (fa * fm < 0.0) {
        b = mid;
      } else {
        a = mid;
        fa = fm;
      }
    }
    const double root = 0.5 * (a + b);
    const double froot = f(root);
    ++evals;
    candidates.push_back({root, froot, ts[i], ts[i + 1]});
  }

  if (candidates.empty())
    throw no_bracket_error(
        "no sign change over [" + fmt_g17(lo) + ", " + fmt_g17(hi) +
        "]; endpoint values " + fmt_g17(fs.front()) + " and " +
        fmt_g17(fs.back()));

  const Candidate* best = &candidates.front();
  for (const Candidate& c : candidates)
    if (std::abs(c.root) < std::abs(best->root)) best = &c;

  return {best->root, best->f_root, evals, best->lo, best->hi,
          static_cast<int>(candidates.size())};
}

}  // namespace probprem
