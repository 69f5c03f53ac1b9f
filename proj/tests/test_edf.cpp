#include <doctest.h>

#include <cmath>
#include <vector>

#include "sgof/edf_tests.hpp"
#include "sgof/rng.hpp"

using namespace sgof;

TEST_CASE("normal cdf and quantile invert each other") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  for (double p : {0.001, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-11));
  }
}

TEST_CASE("kolmogorov survival function") {
  // classical table values
  CHECK(kolmogorov_sf(0.5) == doctest::Approx(0.963945243665).epsilon(1e-9));
  CHECK(kolmogorov_sf(0.8) == doctest::Approx(0.544142411574).epsilon(1e-9));
  CHECK(kolmogorov_sf(1.0) == doctest::Approx(0.269999671677).epsilon(1e-9));
  CHECK(kolmogorov_sf(1.36) == doctest::Approx(0.049485876755).epsilon(1e-9));
  CHECK(kolmogorov_sf(2.0) == doctest::Approx(0.000670925256).epsilon(1e-7));
  CHECK(kolmogorov_sf(0.0) == 1.0);
}

TEST_CASE("two-sample ks statistic by hand") {
  const std::vector<double> a{1.0, 2.0};
  const std::vector<double> b{1.5, 2.5};
  const KsResult r = ks_two_sample(a, b);
  CHECK(r.statistic == doctest::Approx(0.5).epsilon(1e-15));

  const std::vector<double> same{0.1, 0.2, 0.7};
  const KsResult eq = ks_two_sample(same, same);
  CHECK(eq.statistic == doctest::Approx(0.0));
  CHECK(eq.p_value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ks p-values behave under the null and the alternative") {
  RngStream rng(1234, 9);
  const std::size_t n = 20000;
  std::vector<double> a(n), b(n), shifted(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.next_double();
    b[i] = rng.next_double();
    shifted[i] = 0.8 * rng.next_double() + 0.2;
  }
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  CHECK(ks_two_sample(a, shifted).p_value < 1e-8);
}

TEST_CASE("anderson-darling limiting distribution anchors") {
  // published case-0 critical values
  CHECK(anderson_darling_sf(1.933) == doctest::Approx(0.10).epsilon(0.01));
  CHECK(anderson_darling_sf(2.492) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(anderson_darling_sf(3.857) == doctest::Approx(0.01).epsilon(0.05));
  CHECK(anderson_darling_sf(6.0) == doctest::Approx(0.001).epsilon(0.05));
}

TEST_CASE("anderson-darling accepts true normals, flags shifted ones") {
  RngStream rng(5150, 3);
  const std::size_t n = 5000;
  std::vector<double> z(n), shifted(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = rng.next_double();
    if (v <= 0.0) v = 1e-12;
    z[i] = normal_quantile(v);
    shifted[i] = z[i] + 0.25;
  }
  const AdResult ok = anderson_darling_standard_normal(z);
  CHECK(ok.p_value > 0.01);
  const AdResult bad = anderson_darling_standard_normal(shifted);
  CHECK(bad.p_value < 1e-6);
}

TEST_CASE("anderson-darling empirical level matches the limiting law") {
  // simulate null A^2 values and compare tail rates to the asymptotic curve
  const int trials = 2000;
  const std::size_t n = 100;
  int past_05 = 0;
  std::vector<double> z(n);
  for (int t = 0; t < trials; ++t) {
    RngStream rng(90210, static_cast<std::uint64_t>(t));
    for (std::size_t i = 0; i < n; ++i) {
      double v = rng.next_double();
      if (v <= 0.0) v = 1e-12;
      z[i] = normal_quantile(v);
    }
    const AdResult r = anderson_darling_standard_normal(z);
    if (r.a_squared > 2.492) ++past_05;
  }
  const double rate = static_cast<double>(past_05) / trials;
  CHECK(rate == doctest::Approx(0.05).epsilon(0.45));  // 3.5 sigma band
}
