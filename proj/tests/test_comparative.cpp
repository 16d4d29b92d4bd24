#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "probprem/comparative.hpp"
#include "probprem/errors.hpp"
#include "probprem/roots.hpp"

using namespace probprem;

namespace {
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<SpreadSpec> random_specs(std::mt19937_64& rng, int n, double w_lo,
                                     double w_hi) {
  std::vector<SpreadSpec> out;
  while (static_cast<int>(out.size()) < n) {
    const double w0 = w_lo + (w_hi - w_lo) * unit(rng);
    const double p0 = 0.1 + 0.8 * unit(rng);
    const double e1 = (0.05 + 0.9 * unit(rng)) * std::min(p0, 1.0 - p0);
    const double e2 = (0.05 + 0.9 * unit(rng)) * (w0 - w_lo + 0.1);
    if (!(e2 > 0.0)) continue;
    out.emplace_back(w0, p0, e1, e2);
  }
  return out;
}
}  // namespace

TEST_CASE("index dominance on crra pairs") {
  const auto x_grid = linspace(0.5, 20.0, 257);
  const auto p_grid = linspace(0.01, 0.99, 257);
  const auto ident = WeightingModel::identity();

  const auto up = check_index_dominance(UtilityModel::crra(1.0),
                                        UtilityModel::crra(2.0), ident, ident,
                                        x_grid, p_grid);
  CHECK(up.holds);

  const auto down = check_index_dominance(UtilityModel::crra(2.0),
                                          UtilityModel::crra(1.0), ident, ident,
                                          x_grid, p_grid);
  CHECK_FALSE(down.holds);
  CHECK(down.worst_gap_utility > 0.0);

  // weighting side alone can break dominance
  const auto wside = check_index_dominance(
      UtilityModel::linear(), UtilityModel::linear(),
      WeightingModel::quadratic(), ident, x_grid, p_grid);
  CHECK_FALSE(wside.holds);
  CHECK(wside.worst_gap_weighting > 0.0);
  CHECK(wside.worst_gap_utility <= 1e-10);
}

TEST_CASE("kinks on the grid are rejected") {
  const auto x_grid = linspace(0.5, 20.0, 17);
  const auto p_grid = linspace(0.1, 0.9, 17);  // hits 0.5
  CHECK_THROWS_AS(
      check_index_dominance(UtilityModel::linear(), UtilityModel::linear(),
                            WeightingModel::avar_kink(0.5),
                            WeightingModel::avar_kink(0.5), x_grid, p_grid),
      input_error);
}

TEST_CASE("premium dominance follows index dominance") {
  std::mt19937_64 rng(91);
  const auto specs = random_specs(rng, 200, 1.0, 15.0);
  const auto ident = WeightingModel::identity();

  const auto res = check_premium_dominance(UtilityModel::crra(1.0),
                                           UtilityModel::crra(2.0), ident,
                                           ident, specs);
  CHECK(res.holds);

  const auto rev = check_premium_dominance(UtilityModel::crra(2.0),
                                           UtilityModel::crra(1.0), ident,
                                           ident, specs);
  CHECK_FALSE(rev.holds);
  REQUIRE(rev.worst_spec.has_value());
  CHECK(rev.worst_gap > 0.0);
}

TEST_CASE("concavified pairs dominate") {
  // crra(2) is a concave transform of crra(1); the quadratic composite
  // is a concave transform of its inner weighting
  std::mt19937_64 rng(97);
  const auto specs = random_specs(rng, 100, 1.0, 12.0);
  const WeightingModel h1 = WeightingModel::prelec(0.9, 1.0);
  const WeightingModel h2 = WeightingModel::compose(WeightingModel::quadratic(), h1);
  const auto res = check_premium_dominance(UtilityModel::crra(1.0),
                                           UtilityModel::crra(2.0), h1, h2,
                                           specs);
  CHECK(res.holds);
}

TEST_CASE("concavification midpoint test") {
  const auto x_grid = linspace(0.5, 20.0, 64);
  CHECK(concavification_check(UtilityModel::linear(), UtilityModel::crra(1.0),
                              x_grid));
  CHECK(concavification_check(UtilityModel::crra(1.0), UtilityModel::crra(2.0),
                              x_grid));
  CHECK_FALSE(concavification_check(UtilityModel::crra(2.0),
                                    UtilityModel::crra(1.0), x_grid));
  // convex composite: value of x^2 against identity
  CHECK_FALSE(concavification_check(
      UtilityModel::linear(),
      UtilityModel::piecewise_linear({{0.0, 0.0}, {1.0, 0.5}, {2.0, 4.0}}),
      linspace(0.0, 2.0, 16)));

  const auto p_grid = linspace(0.02, 0.98, 64);
  const WeightingModel h1 = WeightingModel::prelec(0.9, 1.0);
  const WeightingModel h2 = WeightingModel::compose(WeightingModel::quadratic(), h1);
  CHECK(concavification_check(h1, h2, p_grid));
  CHECK_FALSE(concavification_check(h2, h1, p_grid));
}

TEST_CASE("index dominance equivalence with concavification") {
  const auto x_grid = linspace(0.5, 20.0, 257);
  const auto p_grid = linspace(0.02, 0.98, 129);
  struct Pair {
    UtilityModel u1, u2;
  };
  const Pair pairs[] = {{UtilityModel::crra(1.0), UtilityModel::crra(2.0)},
                        {UtilityModel::crra(2.0), UtilityModel::crra(1.0)},
                        {UtilityModel::cara(0.2), UtilityModel::cara(0.5)}};
  for (const Pair& pr : pairs) {
    const auto idx =
        check_index_dominance(pr.u1, pr.u2, WeightingModel::identity(),
                              WeightingModel::identity(), x_grid, p_grid);
    CHECK(idx.holds == concavification_check(pr.u1, pr.u2, x_grid));
  }
}

TEST_CASE("violated dominance yields a premium counterexample") {
  const auto x_grid = linspace(0.5, 20.0, 257);
  const auto p_grid = linspace(0.01, 0.99, 257);

  SUBCASE("utility-side violation") {
    const WeightingModel h = WeightingModel::prelec(0.9, 1.0);
    const auto idx = check_index_dominance(
        UtilityModel::crra(2.0), UtilityModel::crra(1.0), h, h, x_grid, p_grid);
    REQUIRE_FALSE(idx.holds);
    const auto cex = find_premium_counterexample(
        UtilityModel::crra(2.0), UtilityModel::crra(1.0), h, h, idx);
    REQUIRE(cex.has_value());
  }
  SUBCASE("weighting-side violation") {
    const UtilityModel u = UtilityModel::crra(1.0);
    const auto idx = check_index_dominance(u, u, WeightingModel::quadratic(),
                                           WeightingModel::identity(), x_grid,
                                           p_grid);
    REQUIRE_FALSE(idx.holds);
    const auto cex = find_premium_counterexample(
        u, u, WeightingModel::quadratic(), WeightingModel::identity(), idx);
    REQUIRE(cex.has_value());
  }
}
