#include "sgof/spacings.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgof {

std::string to_string(Ordering o) {
  return o == Ordering::Usual ? "usual" : "co";
}

std::string to_string(Layout l) {
  return l == Layout::Disjoint ? "disjoint" : "overlap";
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("Sample: empty");
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::domain_error("Sample: value outside [0,1]");
    }
  }
}

double co_rank(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("co_rank: x outside [0,1]");
  return std::fabs(2.0 * x - 1.0);
}

void gaps_from_sorted(std::span<const double> sorted, std::span<double> gaps_out) {
  const std::size_t n = sorted.size();
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    gaps_out[i] = sorted[i] - prev;
    prev = sorted[i];
  }
  gaps_out[n] = 1.0 - prev;
}

void window_sums(std::span<const double> simple_gaps, int step, Layout layout,
                 std::vector<double>& out) {
  const int n = static_cast<int>(simple_gaps.size());
  if (step < 1 || step > n) throw std::invalid_argument("window_sums: bad step");
  if (layout == Layout::Disjoint && n % step != 0) {
    throw std::invalid_argument("window_sums: step does not divide the gap count");
  }
  out.clear();
  if (layout == Layout::Overlapping) {
    out.reserve(n - step + 1);
    double acc = 0.0;
    for (int i = 0; i < step; ++i) acc += simple_gaps[i];
    out.push_back(acc);
    for (int k = step; k < n; ++k) {
      acc += simple_gaps[k] - simple_gaps[k - step];
      out.push_back(acc);
    }
  } else {
    out.reserve(n / step);
    for (int k = 0; k < n; k += step) {
      double acc = 0.0;
      for (int i = 0; i < step; ++i) acc += simple_gaps[k + i];
      out.push_back(acc);
    }
  }
}

SpacingsVector simple_spacings(const Sample& s, Ordering ordering) {
  std::vector<double> points(s.values());
  if (ordering == Ordering::CentreOutward) {
    for (double& v : points) v = co_rank(v);
  }
  std::sort(points.begin(), points.end());

  SpacingsVector out;
  out.scheme = SpacingScheme{ordering, 1, Layout::Disjoint};
  out.n_effective = static_cast<int>(points.size()) + 1;
  out.gaps.resize(points.size() + 1);
  gaps_from_sorted(points, out.gaps);
  return out;
}

SpacingsVector m_step_spacings(const Sample& s, const SpacingScheme& scheme) {
  if (scheme.step < 1) throw std::invalid_argument("m_step_spacings: step must be >= 1");
  SpacingsVector simple = simple_spacings(s, scheme.ordering);
  if (scheme.step > simple.n_effective) {
    throw std::invalid_argument("m_step_spacings: step exceeds the spacing count");
  }
  if (scheme.simple()) {
    simple.scheme = scheme;
    return simple;
  }

  SpacingsVector out;
  out.scheme = scheme;
  out.n_effective = simple.n_effective;
  window_sums(simple.gaps, scheme.step, scheme.layout, out.gaps);
  return out;
}

}  // namespace sgof
