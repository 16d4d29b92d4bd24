#pragma once
#include <functional>
#include <vector>

namespace probprem {

struct SolverOptions {
  double tol = 1e-13;       // absolute tolerance on the root
  int max_iterations = 200;  // bisection cap per bracket
  int scan_points = 64;      // equally spaced scan intervals for bracketing
};

struct RootResult {
  double root;
  double f_root;
  int iterations;    // total function evaluations
  double lo, hi;     // sign-change subinterval the root came from
  int sign_changes;  // subintervals detected by the scan
};

/// Scan [lo, hi] on an equally spaced grid for sign changes, bisect
/// every detected subinterval, and return the root closest to zero.
/// Bisection only: integrands may be kinked or have unbounded second
/// derivatives near endpoints. Throws no_bracket_error when the scan
/// finds no sign change.
RootResult scan_bisect(const std::function<double(double)>& f, double lo,
                       double hi, const SolverOptions& opts = {});

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace probprem
