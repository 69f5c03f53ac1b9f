#include <doctest.h>

#include <cmath>
#include <vector>

#include "sgof/quadrature.hpp"

using namespace sgof;

namespace {
constexpr double kEulerGamma = 0.5772156649015329;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

TEST_CASE("polynomials are near-exact") {
  const auto r = integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  const auto high = integrate([](double x) { return std::pow(x, 20.0); }, 0.0, 1.0, 1e-12);
  CHECK(high.value == doctest::Approx(1.0 / 21.0).epsilon(1e-13));
}

TEST_CASE("integrable endpoint singularities converge") {
  const auto inv_sqrt = integrate([](double x) { return 1.0 / std::sqrt(x); },
                                  0.0, 1.0, 1e-10, 100000);
  CHECK(inv_sqrt.converged);
  CHECK(inv_sqrt.value == doctest::Approx(2.0).epsilon(1e-9));

  const auto log_int = integrate([](double x) { return std::log(x); }, 0.0, 1.0,
                                 1e-10, 100000);
  CHECK(log_int.value == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("segment lists route around interior joints") {
  // |x - 1/2|^{-1/2} is integrable but singular in the middle
  const std::vector<double> pts{0.0, 0.5, 1.0};
  const auto r = integrate_segments(
      [](double x) { return 1.0 / std::sqrt(std::fabs(x - 0.5)); }, pts, 1e-9,
      200000);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("exponential-weight moments reproduce factorials") {
  double factorial = 1.0;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) factorial *= k;
    const auto r = integrate_exponential_weight(
        [k](double z) { return std::pow(z, static_cast<double>(k)); }, 1e-11,
        100000);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(factorial).epsilon(1e-9));
  }
}

TEST_CASE("exponential-weight log moments") {
  const auto m1 = integrate_exponential_weight([](double z) { return std::log(z); },
                                               1e-11, 200000);
  CHECK(m1.value == doctest::Approx(-kEulerGamma).epsilon(1e-9));

  const auto m2 = integrate_exponential_weight(
      [](double z) { const double l = std::log(z); return l * l; }, 1e-11, 200000);
  CHECK(m2.value ==
        doctest::Approx(kEulerGamma * kEulerGamma + kPi * kPi / 6.0).epsilon(1e-9));
}

TEST_CASE("error bound tracks the truth") {
  const auto r = integrate([](double x) { return std::sin(10.0 * x); }, 0.0, 3.0,
                           1e-11);
  const double exact = (1.0 - std::cos(30.0)) / 10.0;
  CHECK(std::fabs(r.value - exact) <= r.error + 1e-13);
}
