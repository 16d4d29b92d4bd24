#pragma once
#include <cstddef>
#include <string>
#include <vector>

namespace probprem {

struct Atom {
  double payoff;
  double prob;
};

/// Finite discrete risk. Atoms are kept sorted by payoff ascending;
/// payoffs equal within 1e-12 are merged, zero-probability atoms are
/// dropped, and the probabilities must sum to 1 within 1e-12 (no silent
/// renormalization). Immutable after construction.
class Lottery {
 public:
  explicit Lottery(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double min_payoff() const { return atoms_.front().payoff; }
  double max_payoff() const { return atoms_.back().payoff; }

  // {"atoms": [[payoff, prob], ...]} with atoms ascending.
  std::string to_json() const;
  static Lottery from_json(const std::string& text);

 private:
  std::vector<Atom> atoms_;
};

double mean(const Lottery& l);
double variance(const Lottery& l);

/// Second dual moment about the mean: expected excess of the larger of
/// two independent copies over the mean, via the squared-CDF jump form.
double maxiance(const Lottery& l);

/// Expected value of the smaller of two independent copies, minus the
/// mean. Computed from squared survival jumps, independently of
/// maxiance.
double miniance(const Lottery& l);

/// True iff the two lotteries have equal means (within 1e-10) and
/// `fine` is a mean-preserving contraction of `coarse` (second-order
/// stochastic dominance of `fine` over `coarse`).
bool is_mps(const Lottery& coarse, const Lottery& fine);

/// Parameters of the binary mean-preserving-spread family: the base
/// risk pays w0 -+ eps2 with probabilities p0 / 1-p0, and the
/// contraction moves mass eps1 from each branch to the middle.
struct SpreadSpec {
  double w0;
  double p0;    // in (0,1)
  double eps1;  // in (0, min(p0, 1-p0)]
  double eps2;  // > 0

  SpreadSpec(double w0, double p0, double eps1, double eps2);
};

Lottery make_c(const SpreadSpec& s);
Lottery make_d(const SpreadSpec& s);
/// The mu-shifted base risk: {w0-eps2: p0-mu, w0+eps2: 1-p0+mu}.
Lottery make_c_mu(const SpreadSpec& s, double mu);

// Risk-sharing lotteries: a loss of `loss` with a small probability,
// its unfair improvement, and the n-person equal-sharing pool.
Lottery make_a(double eps1, double loss, double w0);
Lottery make_a_star(double eps1, double m, double loss, double w0);
Lottery make_b_n(int n, double eps1, double loss, double w0);

/// Zero-mean n-state risk of total probability mass 2*eps1, each state
/// carrying mass 2*eps1/n. Payoffs are sorted ascending and must sum to
/// zero within 1e-12; at least one payoff is strictly negative and at
/// least one is non-negative. The per-state list is kept unmerged
/// because premium shifts act state by state.
struct NStateSpread {
  std::vector<double> payoffs;  // ascending
  double eps1;                  // in (0, 1/2]
  double p0;
  double w0;
  int n1;  // states with strictly negative payoff
  int n2;  // n - n1

  NStateSpread(std::vector<double> payoffs, double eps1, double p0, double w0);
  int n() const { return static_cast<int>(payoffs.size()); }
};

/// Moments of the unconditional spread risk. mbar2 follows the
/// sub-distribution convention (4 eps1^2 / n^2 * sum (2i-1) x_i), which
/// for the embedded binary spread gives 2 eps1^2 eps2 -- not the
/// maxiance of the surrounding three-point lottery, which is
/// 2 eps1 eps2 - 2 eps1^2 eps2. Both conventions are deliberately
/// available: use `maxiance` for full lotteries and these moments for
/// premium approximations.
struct SpreadMoments {
  double m2;       // unconditional variance
  double mbar2;    // unconditional maxiance, sub-distribution convention
  double py;       // 1-norm of spread payoffs
  double pr;       // total unconditional probability mass
  double py_star;  // weighted 1-norm for asymmetric n-state spreads
};

SpreadMoments spread_moments(const SpreadSpec& s);
SpreadMoments spread_moments(const NStateSpread& s);

}  // namespace probprem
