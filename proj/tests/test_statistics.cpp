#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "sgof/statistics.hpp"

using namespace sgof;

TEST_CASE("h function values") {
  const auto g = HFunction::greenwood();
  const auto m = HFunction::moran();
  const auto r = HFunction::rao();
  const auto e = HFunction::entropy();
  CHECK(g(1.0) == 1.0);
  CHECK(m(1.0) == 0.0);
  CHECK(r(1.0) == 0.0);
  CHECK(e(1.0) == 0.0);
  CHECK(g(2.0) == 4.0);
  CHECK(e(0.0) == 0.0);  // continuous extension of x log x
  CHECK(std::isinf(m(0.0)));
  CHECK_THROWS_AS(g(-1.0), std::domain_error);
}

TEST_CASE("statistic at the equal-gap point") {
  // perfectly equidistant sample: every scaled gap is exactly 1
  for (int n_obs : {4, 9, 25}) {
    std::vector<double> vals;
    for (int i = 1; i <= n_obs; ++i) {
      vals.push_back(static_cast<double>(i) / (n_obs + 1));
    }
    const Sample s(vals);
    const auto sv = simple_spacings(s, Ordering::Usual);
    CHECK(std::fabs(statistic(sv, HFunction::greenwood()).value - 1.0) < 1e-12);
    CHECK(std::fabs(statistic(sv, HFunction::moran()).value) < 1e-12);
    CHECK(std::fabs(statistic(sv, HFunction::rao()).value) < 1e-12);
    CHECK(std::fabs(statistic(sv, HFunction::entropy()).value) < 1e-12);
  }
}

TEST_CASE("greenwood hand value") {
  const Sample s({0.1, 0.5, 0.9});  // gaps 0.1 0.4 0.4 0.1, n = 4
  const auto sv = simple_spacings(s, Ordering::Usual);
  const auto v = statistic(sv, HFunction::greenwood());
  CHECK(v.value == doctest::Approx(1.36).epsilon(1e-12));
  CHECK_FALSE(v.degenerate);
}

TEST_CASE("combined max statistic") {
  const Sample s({0.25, 0.75});
  const auto g = HFunction::greenwood();
  const auto usual = statistic(simple_spacings(s, Ordering::Usual), g);
  const auto co = statistic(simple_spacings(s, Ordering::CentreOutward), g);
  CHECK(usual.value == doctest::Approx(1.125).epsilon(1e-12));
  CHECK(co.value == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(combined_max_statistic(s, g).value == doctest::Approx(1.5).epsilon(1e-12));

  // equal components: {0, 1} has gap multiset {0, 0, 1} under both orderings
  const Sample sym({0.0, 1.0});
  const auto mu = statistic(simple_spacings(sym, Ordering::Usual), g);
  const auto mc = statistic(simple_spacings(sym, Ordering::CentreOutward), g);
  CHECK(mu.value == doctest::Approx(mc.value));
  CHECK(combined_max_statistic(sym, g).value == doctest::Approx(mu.value));
  CHECK(combined_max_statistic(sym, HFunction::rao()).value ==
        doctest::Approx(statistic(simple_spacings(sym, Ordering::Usual),
                                  HFunction::rao()).value));
}

TEST_CASE("moran over a zero gap is a degenerate infinity") {
  const Sample tied({0.3, 0.3, 0.8});
  const auto sv = simple_spacings(tied, Ordering::Usual);
  const auto v = statistic(sv, HFunction::moran());
  CHECK(v.degenerate);
  CHECK(std::isinf(v.value));
  // entropy tolerates the zero gap
  const auto e = statistic(sv, HFunction::entropy());
  CHECK_FALSE(e.degenerate);
  CHECK(std::isfinite(e.value));
}

TEST_CASE("jensen lower bounds with equality only at equal gaps") {
  std::mt19937_64 gen(4242);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> vals(5 + static_cast<int>(gen() % 30));
    for (double& v : vals) v = unif(gen);
    const auto sv = simple_spacings(Sample(vals), Ordering::Usual);
    CHECK(statistic(sv, HFunction::greenwood()).value >= 1.0);
    CHECK(statistic(sv, HFunction::moran()).value >= -1e-12);
    CHECK(statistic(sv, HFunction::rao()).value >= 0.0);
    CHECK(statistic(sv, HFunction::entropy()).value >= -1e-12);
  }
}

TEST_CASE("statistic is permutation-symmetric in the gaps") {
  SpacingsVector sv;
  sv.scheme = SpacingScheme{};
  sv.n_effective = 4;
  sv.gaps = {0.1, 0.4, 0.4, 0.1};
  const double a = statistic(sv, HFunction::entropy()).value;
  sv.gaps = {0.4, 0.1, 0.1, 0.4};
  const double b = statistic(sv, HFunction::entropy()).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-15));
}

TEST_CASE("reflection invariance of the centre-outward statistic") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> vals(40), mirrored(40);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    vals[i] = unif(gen);
    mirrored[i] = 1.0 - vals[i];
  }
  for (const HFunction& h : HFunction::builtins()) {
    const double a = statistic(simple_spacings(Sample(vals), Ordering::CentreOutward), h).value;
    const double b =
        statistic(simple_spacings(Sample(mirrored), Ordering::CentreOutward), h).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("m-step normalization keeps the equal-gap point at h(1)") {
  std::vector<double> vals;
  for (int i = 1; i <= 11; ++i) vals.push_back(i / 12.0);
  const Sample s(vals);  // 12 equal simple gaps
  for (Layout layout : {Layout::Disjoint, Layout::Overlapping}) {
    const auto sv = m_step_spacings(s, {Ordering::Usual, 3, layout});
    // scaled gaps n*g/m = 1 exactly
    CHECK(std::fabs(statistic(sv, HFunction::greenwood()).value - 1.0) < 1e-10);
    CHECK(std::fabs(statistic(sv, HFunction::moran()).value) < 1e-10);
  }
}

TEST_CASE("custom h functions evaluate through the same path") {
  const auto h = HFunction::custom("square_plus", [](double x) { return x * x + 1.0; });
  SpacingsVector sv;
  sv.n_effective = 4;
  sv.gaps = {0.25, 0.25, 0.25, 0.25};
  CHECK(statistic(sv, h).value == doctest::Approx(2.0));
}

TEST_CASE("statistic spec parsing") {
  CHECK(StatSpec::parse("greenwood").canonical == "greenwood");
  CHECK(StatSpec::parse("GREENWOOD").canonical == "greenwood");
  CHECK(StatSpec::parse("moran:co").canonical == "moran:co");
  CHECK(StatSpec::parse("moran:co").scheme.ordering == Ordering::CentreOutward);
  CHECK(StatSpec::parse("rao:max").combined_max);
  CHECK(StatSpec::parse("entropy:m=2:overlap").scheme.step == 2);
  CHECK(StatSpec::parse("entropy:m=2:overlap").scheme.layout == Layout::Overlapping);
  CHECK(StatSpec::parse("greenwood:co:m=3:disjoint").canonical ==
        "greenwood:co:m=3:disjoint");
  CHECK_THROWS_AS(StatSpec::parse("ozymandias"), std::invalid_argument);
  CHECK_THROWS_AS(StatSpec::parse("greenwood:m=2"), std::invalid_argument);
  CHECK_THROWS_AS(StatSpec::parse("greenwood:m=0:disjoint"), std::invalid_argument);
  CHECK_THROWS_AS(StatSpec::parse("rao:max:co"), std::invalid_argument);
  CHECK_THROWS_AS(StatSpec::parse("rao:banana"), std::invalid_argument);

  const Sample s({0.1, 0.5, 0.9});
  CHECK(StatSpec::parse("greenwood").evaluate(s).value ==
        doctest::Approx(1.36).epsilon(1e-12));
}
