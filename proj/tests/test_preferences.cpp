#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "probprem/errors.hpp"
#include "probprem/preferences.hpp"

using namespace probprem;

namespace {
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// d1 against a central difference of values, d2 against a central
// difference of analytic d1 (keeps the second difference well above
// roundoff at step 1e-5)
template <typename M>
void check_derivatives(const M& m, double x, double step = 1e-5) {
  const double fd1 = (m.value(x + step) - m.value(x - step)) / (2.0 * step);
  const double fd2 = (m.d1(x + step) - m.d1(x - step)) / (2.0 * step);
  const double d1 = m.d1(x);
  const double d2 = m.d2(x);
  CHECK(std::abs(d1 - fd1) <= 1e-6 * std::max(std::abs(d1), 1e-3));
  CHECK(std::abs(d2 - fd2) <= 1e-6 * std::max(std::abs(d2), 1e-3));
}
}  // namespace

TEST_CASE("utility values and identities") {
  const UtilityModel lin = UtilityModel::linear();
  CHECK(lin.value(3.0) == 3.0);
  CHECK(lin.d2(3.0) == 0.0);

  const UtilityModel log_u = UtilityModel::crra(1.0);
  CHECK(log_u.value(std::exp(1.0)) == doctest::Approx(1.0));
  CHECK(log_u.d2(10.0) / log_u.d1(10.0) == doctest::Approx(-0.1));

  const UtilityModel cara = UtilityModel::cara(0.7);
  CHECK(-cara.d2(2.0) / cara.d1(2.0) == doctest::Approx(0.7));
  CHECK(-cara.d2(-3.0) / cara.d1(-3.0) == doctest::Approx(0.7));

  const UtilityModel quad = UtilityModel::quadratic(0.01);
  CHECK(quad.in_domain(99.0));
  CHECK_FALSE(quad.in_domain(100.0));
  CHECK_THROWS_AS(quad.value(101.0), input_error);
  CHECK_THROWS_AS(UtilityModel::crra(2.0).value(-1.0), input_error);
}

TEST_CASE("smooth derivatives match finite differences") {
  std::mt19937_64 rng(123);
  for (int i = 0; i < 50; ++i) {
    check_derivatives(UtilityModel::crra(0.5 + 3.0 * unit(rng)),
                      0.5 + 10.0 * unit(rng));
    check_derivatives(UtilityModel::cara(0.05 + unit(rng)),
                      -2.0 + 6.0 * unit(rng));
    check_derivatives(UtilityModel::quadratic(0.005 + 0.01 * unit(rng)),
                      -5.0 + 10.0 * unit(rng));
    const double p = 0.05 + 0.9 * unit(rng);
    check_derivatives(WeightingModel::prelec(0.4 + unit(rng), 0.5 + unit(rng)), p);
    check_derivatives(WeightingModel::tversky_kahneman(0.5 + 0.5 * unit(rng)), p);
    check_derivatives(WeightingModel::power(0.5 + 2.0 * unit(rng)), p);
    check_derivatives(WeightingModel::quadratic(), p);
    check_derivatives(
        WeightingModel::compose(WeightingModel::quadratic(),
                                WeightingModel::prelec(0.9, 1.0)),
        p);
  }
}

TEST_CASE("weighting endpoints pin 0 and 1") {
  const std::vector<WeightingModel> models = {
      WeightingModel::identity(),
      WeightingModel::power(0.7),
      WeightingModel::quadratic(),
      WeightingModel::prelec(0.65, 1.0),
      WeightingModel::tversky_kahneman(0.61),
      WeightingModel::avar_kink(0.3),
      WeightingModel::piecewise_linear({{0.0, 0.0}, {0.5, 0.8}, {1.0, 1.0}}),
      WeightingModel::compose(WeightingModel::quadratic(),
                              WeightingModel::prelec(0.65, 1.0))};
  for (const auto& h : models) {
    CHECK(std::abs(h.value(0.0)) <= 1e-12);
    CHECK(std::abs(h.value(1.0) - 1.0) <= 1e-12);
    double prev = 0.0;
    for (int i = 1; i <= 1000; ++i) {
      const double v = h.value(i / 1000.0);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("identity and quadratic weighting indexes") {
  const WeightingModel ident = WeightingModel::identity();
  CHECK(ident.d2(0.3) == 0.0);
  const WeightingModel quadw = WeightingModel::quadratic();
  // h''/h' = -2/(2-2p)
  CHECK(quadw.d2(0.25) / quadw.d1(0.25) == doctest::Approx(-2.0 / 1.5));
  const auto li = local_indexes(UtilityModel::linear(), quadw, 0.0, 0.5);
  CHECK(li.dara == doctest::Approx(2.0));
  CHECK(li.ara == 0.0);
}

TEST_CASE("one sided derivatives") {
  const WeightingModel avar = WeightingModel::avar_kink(0.5);
  const auto [l, r] = avar.one_sided(0.5);
  CHECK(l == doctest::Approx(2.0));
  CHECK(r == 0.0);
  CHECK_THROWS_AS(avar.d1(0.5), input_error);
  CHECK(avar.d1(0.25) == doctest::Approx(2.0));
  CHECK(avar.d1(0.75) == 0.0);

  const WeightingModel prelec = WeightingModel::prelec(0.65, 1.0);
  const auto [pl, pr] = prelec.one_sided(0.3);
  CHECK(pl == pr);

  const WeightingModel pwl =
      WeightingModel::piecewise_linear({{0.0, 0.0}, {0.5, 0.8}, {1.0, 1.0}});
  const auto [sl, sr] = pwl.one_sided(0.5);
  CHECK(sl == doctest::Approx(1.6));
  CHECK(sr == doctest::Approx(0.4));
  CHECK_THROWS_AS(pwl.d1(0.5), input_error);
  CHECK(pwl.kinks() == std::vector<double>{0.5});
}

TEST_CASE("prelec endpoint guard") {
  const WeightingModel prelec = WeightingModel::prelec(0.65, 1.0);
  CHECK_THROWS_AS(prelec.d1(1e-12), input_error);
  CHECK_THROWS_AS(prelec.d2(1.0 - 1e-12), input_error);
  CHECK(prelec.value(0.0) == 0.0);  // values stay defined at the endpoints
}

TEST_CASE("affine transformations leave ara unchanged") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const UtilityModel u = UtilityModel::crra(0.5 + 2.0 * unit(rng));
    const double a = 0.1 + 5.0 * unit(rng);
    const double b = -10.0 + 20.0 * unit(rng);
    const UtilityModel v = u.affine(a, b);
    const double x = 0.5 + 10.0 * unit(rng);
    CHECK(v.value(x) == doctest::Approx(a * u.value(x) + b));
    CHECK(-v.d2(x) / v.d1(x) == doctest::Approx(-u.d2(x) / u.d1(x)));
  }
  CHECK_THROWS_AS(UtilityModel::linear().affine(-1.0, 0.0), input_error);
}

TEST_CASE("cara local index is its parameter") {
  for (double a : {0.25, 1.0, 2.0}) {
    const auto li = local_indexes(UtilityModel::cara(a),
                                  WeightingModel::identity(), 3.0, 0.4);
    CHECK(li.ara == doctest::Approx(a));
    CHECK(li.dara == 0.0);
  }
}

TEST_CASE("local indexes refuse kinks") {
  CHECK_THROWS_AS(local_indexes(UtilityModel::linear(),
                                WeightingModel::avar_kink(0.5), 0.0, 0.5),
                  input_error);
}

TEST_CASE("piecewise utility") {
  const UtilityModel pwl =
      UtilityModel::piecewise_linear({{0.0, 0.0}, {1.0, 2.0}, {3.0, 3.0}});
  CHECK(pwl.value(0.5) == doctest::Approx(1.0));
  CHECK(pwl.d1(0.5) == doctest::Approx(2.0));
  CHECK(pwl.d1(2.0) == doctest::Approx(0.5));
  CHECK(pwl.d2(0.5) == 0.0);
  CHECK_THROWS_AS(pwl.d1(1.0), input_error);
  CHECK_THROWS_AS(
      UtilityModel::piecewise_linear({{0.0, 0.0}, {1.0, -1.0}}), input_error);
}

TEST_CASE("model spec parsing") {
  CHECK(parse_utility("linear").family() == UtilityModel::Family::Linear);
  CHECK(parse_utility("crra:gamma=2").family() == UtilityModel::Family::Crra);
  CHECK(parse_utility("cara:a=0.5").d1(0.0) == doctest::Approx(1.0));
  CHECK(parse_utility("quadratic:b=0.01").family() ==
        UtilityModel::Family::Quadratic);
  CHECK(parse_weighting("identity").value(0.3) == 0.3);
  CHECK(parse_weighting("quadw").value(0.5) == doctest::Approx(0.75));
  CHECK(parse_weighting("power:theta=2").value(0.5) == doctest::Approx(0.25));
  CHECK(parse_weighting("prelec:alpha=0.65,beta=1").family() ==
        WeightingModel::Family::Prelec);
  CHECK(parse_weighting("tk:gamma=0.61").family() ==
        WeightingModel::Family::TverskyKahneman);
  CHECK(parse_weighting("avar:p0=0.5").kinks() == std::vector<double>{0.5});

  CHECK_THROWS_AS(parse_utility("nope"), input_error);
  CHECK_THROWS_AS(parse_utility("crra"), input_error);
  CHECK_THROWS_AS(parse_utility("crra:gamma=abc"), input_error);
  CHECK_THROWS_AS(parse_utility("crra:gamma=2,extra=1"), input_error);
  CHECK_THROWS_AS(parse_weighting("prelec:alpha=0.65"), input_error);
}

TEST_CASE("degenerate weighting families rejected") {
  CHECK_THROWS_AS(WeightingModel::tversky_kahneman(0.2), input_error);
  CHECK_THROWS_AS(WeightingModel::power(0.0), input_error);
  CHECK_THROWS_AS(WeightingModel::avar_kink(1.5), input_error);
  CHECK_THROWS_AS(
      WeightingModel::piecewise_linear({{0.0, 0.1}, {1.0, 1.0}}), input_error);
  CHECK_THROWS_AS(WeightingModel::compose(WeightingModel::avar_kink(0.5),
                                          WeightingModel::identity()),
                  input_error);
}
