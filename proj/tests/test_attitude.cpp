#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "probprem/attitude.hpp"
#include "probprem/errors.hpp"
#include "probprem/premium.hpp"
#include "probprem/rdu.hpp"

using namespace probprem;

namespace {
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace

TEST_CASE("risk neutrality is neutral") {
  const auto c = classify(10.0, 0.5, 1.0, UtilityModel::linear(),
                          WeightingModel::identity());
  CHECK(c.order == AttitudeOrder::NeutralOrHigher);
  CHECK(std::abs(c.first_coeff) <= 1e-9);
  CHECK(std::abs(c.second_coeff) <= 1e-6);
  CHECK(c.diagnostics.size() == 11);
}

TEST_CASE("smooth concave weighting is second order") {
  for (double p0 : {0.3, 0.5, 0.7}) {
    const auto c = classify(10.0, p0, 1.0, UtilityModel::linear(),
                            WeightingModel::quadratic());
    CHECK(c.order == AttitudeOrder::SecondOrderAverse);
    // the premium slope vanishes at the origin
    CHECK(std::abs(c.first_coeff) <= 1e-6);
    // limiting coefficient -h''/(2h') = 1/(2(1-p0))
    CHECK(c.second_coeff ==
          doctest::Approx(1.0 / (2.0 * (1.0 - p0))).epsilon(1e-4));
    CHECK(std::isnan(c.second_coeff) == false);
  }
}

TEST_CASE("inverse-s weighting keeps order two with either sign") {
  // quadratic-region point: h'' > 0 there for this family
  const auto seeking = classify(10.0, 0.7, 1.0, UtilityModel::linear(),
                                WeightingModel::prelec(0.65, 1.0));
  CHECK(seeking.order == AttitudeOrder::SecondOrderSeeking);
  const auto averse = classify(10.0, 0.2, 1.0, UtilityModel::linear(),
                               WeightingModel::prelec(0.65, 1.0));
  CHECK(averse.order == AttitudeOrder::SecondOrderAverse);
}

TEST_CASE("curved utility forces first order") {
  const double w0 = 10.0, eps2 = 0.5;
  const auto c = classify(w0, 0.4, eps2, UtilityModel::crra(2.0),
                          WeightingModel::identity());
  CHECK(c.order == AttitudeOrder::FirstOrderAverse);
  // under expected utility mu/eps1 is constant in eps1
  const UtilityModel u = UtilityModel::crra(2.0);
  const double exact = (2.0 * u.value(w0) - u.value(w0 - eps2) -
                        u.value(w0 + eps2)) /
                       (u.value(w0 + eps2) - u.value(w0 - eps2));
  CHECK(c.first_coeff == doctest::Approx(exact).epsilon(1e-9));
  // and close to the local half-spread approximation eps2 ara / 2
  CHECK(c.first_coeff == doctest::Approx(0.5 * eps2 * 0.2).epsilon(2e-3));
  CHECK(std::isnan(c.second_coeff));
}

TEST_CASE("first order also under inverse-s weighting") {
  const auto c = classify(10.0, 0.4, 0.5, UtilityModel::crra(2.0),
                          WeightingModel::prelec(0.65, 1.0));
  CHECK(c.order == AttitudeOrder::FirstOrderAverse);
}

TEST_CASE("convex utility is first order seeking") {
  // quadratic utility mirrored: use cara with negative coefficient
  const auto c = classify(1.0, 0.5, 0.5, UtilityModel::cara(-0.5),
                          WeightingModel::identity());
  CHECK(c.order == AttitudeOrder::FirstOrderSeeking);
  CHECK(c.first_coeff < 0.0);
}

TEST_CASE("kink slope formula") {
  CHECK(kink_slope(WeightingModel::avar_kink(0.5), 0.5) == doctest::Approx(0.5));
  CHECK(kink_slope(WeightingModel::avar_kink(0.3), 0.7) == doctest::Approx(0.5));
  CHECK(kink_slope(WeightingModel::quadratic(), 0.4) == doctest::Approx(0.0));
  const WeightingModel pwl =
      WeightingModel::piecewise_linear({{0.0, 0.0}, {0.5, 0.8}, {1.0, 1.0}});
  CHECK(kink_slope(pwl, 0.5) == doctest::Approx(0.375));
  // flat left slope is rejected
  const WeightingModel flat = WeightingModel::piecewise_linear(
      {{0.0, 0.0}, {0.5, 0.0}, {1.0, 1.0}});
  CHECK_THROWS_AS(kink_slope(flat, 0.5), input_error);
}

TEST_CASE("classified first coefficient matches the kink slope") {
  const auto c = classify(10.0, 0.5, 1.0, UtilityModel::linear(),
                          WeightingModel::avar_kink(0.5));
  CHECK(c.order == AttitudeOrder::FirstOrderAverse);
  CHECK(c.first_coeff == doctest::Approx(0.5).epsilon(1e-6));

  std::mt19937_64 rng(19);
  for (int i = 0; i < 10; ++i) {
    const double k = 0.3 + 0.4 * unit(rng);
    const double v = k + (1.0 - k) * (0.2 + 0.6 * unit(rng));
    const WeightingModel pwl =
        WeightingModel::piecewise_linear({{0.0, 0.0}, {k, v}, {1.0, 1.0}});
    const auto cl = classify(10.0, k, 1.0, UtilityModel::linear(), pwl);
    CHECK(cl.first_coeff ==
          doctest::Approx(kink_slope(pwl, k)).epsilon(1e-5));
  }
}

TEST_CASE("critical unfairness rate") {
  SUBCASE("zero for risk neutrality") {
    CHECK(std::abs(critical_m(SpreadSpec(10.0, 0.5, 0.1, 1.0),
                              UtilityModel::linear(),
                              WeightingModel::identity())) <= 1e-11);
  }
  SUBCASE("first order: m* has a positive limit") {
    double prev = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double e1 = 0.05 * std::pow(2.0, -k);
      const double m = critical_m(SpreadSpec(10.0, 0.4, e1, 0.5),
                                  UtilityModel::crra(2.0),
                                  WeightingModel::identity());
      CHECK(m > 0.004);
      if (k > 0) CHECK(m == doctest::Approx(prev).epsilon(1e-6));
      prev = m;
    }
  }
  SUBCASE("second order: m*/eps1 has a positive limit") {
    const double p0 = 0.5;
    double prev = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double e1 = 0.05 * std::pow(2.0, -k);
      const double m = critical_m(SpreadSpec(10.0, p0, e1, 1.0),
                                  UtilityModel::linear(),
                                  WeightingModel::quadratic());
      const double rate = m / e1;
      if (k > 0) CHECK(rate == doctest::Approx(prev).epsilon(0.01));
      prev = rate;
    }
    CHECK(prev == doctest::Approx(1.0 / (2.0 * (1.0 - p0))).epsilon(1e-2));
  }
}

TEST_CASE("preference reversal around the critical rate") {
  SUBCASE("first order accepts small unfairness") {
    const UtilityModel u = UtilityModel::crra(2.0);
    const WeightingModel h = WeightingModel::identity();
    const auto c = classify(10.0, 0.4, 0.5, u, h);
    REQUIRE(c.order == AttitudeOrder::FirstOrderAverse);
    const double m = 0.5 * c.first_coeff;
    for (int k = 0; k < 8; ++k) {
      const double e1 = 0.05 * std::pow(2.0, -k);
      const SpreadSpec s(10.0, 0.4, e1, 0.5);
      CHECK(evaluate(make_d(s), u, h) > evaluate(make_c_mu(s, m * e1), u, h));
    }
  }
  SUBCASE("second order rejects any fixed unfairness eventually") {
    const UtilityModel u = UtilityModel::linear();
    const WeightingModel h = WeightingModel::quadratic();
    for (double m : {0.05, 0.2}) {
      bool improved_wins_from_some_point = false;
      for (int k = 0; k < 12; ++k) {
        const double e1 = 0.1 * std::pow(2.0, -k);
        const SpreadSpec s(10.0, 0.4, e1, 1.0);
        const bool improved_wins =
            evaluate(make_c_mu(s, m * e1), u, h) > evaluate(make_d(s), u, h);
        if (improved_wins) improved_wins_from_some_point = true;
        // once the improved risk wins it keeps winning as eps1 shrinks
        if (improved_wins_from_some_point) CHECK(improved_wins);
      }
      CHECK(improved_wins_from_some_point);
    }
  }
}

TEST_CASE("critical rate sign follows the classification") {
  struct Case {
    UtilityModel u;
    WeightingModel h;
  };
  const Case cases[] = {
      {UtilityModel::crra(2.0), WeightingModel::identity()},   // averse
      {UtilityModel::cara(-0.5), WeightingModel::identity()},  // seeking
      {UtilityModel::linear(), WeightingModel::quadratic()},   // averse
      {UtilityModel::linear(), WeightingModel::power(2.0)}};   // seeking
  for (const Case& c : cases) {
    const double w0 = 10.0, p0 = 0.4, eps2 = 0.5;
    const auto cl = classify(w0, p0, eps2, c.u, c.h);
    const double m =
        critical_m(SpreadSpec(w0, p0, 1e-3, eps2), c.u, c.h);
    const bool averse = cl.order == AttitudeOrder::FirstOrderAverse ||
                        cl.order == AttitudeOrder::SecondOrderAverse;
    CHECK((averse ? m > 0.0 : m < 0.0));
  }
}

TEST_CASE("classification diagnostics expose the premium grid") {
  const auto c = classify(10.0, 0.5, 1.0, UtilityModel::linear(),
                          WeightingModel::quadratic());
  REQUIRE(c.diagnostics.size() == 11);
  for (std::size_t i = 1; i < c.diagnostics.size(); ++i) {
    CHECK(c.diagnostics[i].first ==
          doctest::Approx(c.diagnostics[i - 1].first / 2.0));
    CHECK(c.diagnostics[i].second < c.diagnostics[i - 1].second);
  }
}
