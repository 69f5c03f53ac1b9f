#ifndef SGOF_FAMILIES_HPP
#define SGOF_FAMILIES_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sgof/rng.hpp"

namespace sgof {

enum class FamilyKind { Uniform, A, B, C, Beta };

// Distributions supported on [0,1] used against the uniform null.
//
//   A(k)      F(x) = 1 - (1-x)^k, skewed (cluster near 0 for k > 1)
//   B(k)      symmetric, mass piled at 1/2 for k > 1 (lighter tails than U)
//   C(k)      symmetric, mass piled at 0 and 1 for k > 1 (heavier tails)
//   Beta(k,k) symmetric beta
//
// All four coincide with Uniform at k = 1. Densities for k < 1 diverge at
// the piecewise joints (endpoints for A/B/Beta, the midpoint for C); they
// are only evaluated on the open pieces and quadrature must break at
// breakpoints().
class AlternativeFamily {
 public:
  static AlternativeFamily uniform();
  static AlternativeFamily a(double k);
  static AlternativeFamily b(double k);
  static AlternativeFamily c(double k);
  static AlternativeFamily beta(double k);

  // Spec strings: "uniform", "A:1.5", "B:1.5", "C:1.5", "beta:2.5"
  // (case-insensitive). Throws std::invalid_argument on anything else.
  static AlternativeFamily parse(std::string_view spec);

  FamilyKind kind() const { return kind_; }
  double shape() const { return k_; }
  std::string name() const;
  bool symmetric_about_half() const;

  double cdf(double x) const;       // domain error outside [0,1]
  double pdf(double x) const;       // may be +inf at a k<1 joint
  double quantile(double u) const;  // inverse cdf; Beta solved to 1e-12

  void sample_into(std::size_t n, RngStream& rng, std::vector<double>& out) const;
  std::vector<double> sample(std::size_t n, RngStream& rng) const;

  // Interior points where the density formula changes (B and C split at 1/2).
  std::vector<double> breakpoints() const;

 private:
  AlternativeFamily(FamilyKind kind, double k);
  double incbeta_kk(double x) const;  // I_x(k,k) via the cached log B(k,k)

  FamilyKind kind_;
  double k_;
  double log_beta_;  // log B(k,k), cached for the Beta kind
};

// Regularized incomplete beta I_x(a,b) via continued fraction.
double incomplete_beta(double a, double b, double x);

}  // namespace sgof

#endif  // SGOF_FAMILIES_HPP
