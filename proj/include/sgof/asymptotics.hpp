#ifndef SGOF_ASYMPTOTICS_HPP
#define SGOF_ASYMPTOTICS_HPP

#include <functional>
#include <span>

#include "sgof/families.hpp"
#include "sgof/quadrature.hpp"
#include "sgof/statistics.hpp"

namespace sgof {

using RealFn = std::function<double(double)>;

// Moments of h(Z) for Z ~ Exp(1) that drive the normal limits:
//   mean_h     E h(Z)
//   var_h      Var h(Z)
//   cov_h_z    Cov(h(Z), Z)
//   cov_h_quad Cov(h(Z), (Z-2)^2)
struct ExpMoments {
  double mean_h = 0.0;
  double var_h = 0.0;
  double cov_h_z = 0.0;
  double cov_h_quad = 0.0;

  // Null variance of the sqrt(n)-scaled statistic; nonnegative by
  // Cauchy-Schwarz (Var Z = 1), zero exactly for affine h.
  double null_variance() const { return var_h - cov_h_z * cov_h_z; }
};

ExpMoments exp_moments(const HFunction& h, double quad_tol = 1e-10);

struct NullLimit {
  double mean = 0.0;      // E h(Z)
  double variance = 0.0;  // Var h(Z) - Cov^2(h(Z), Z)
};

// Centering and variance of the N(0, sigma^2) limit of
// sqrt(n)(W - E h(Z)); identical for usual and centre-outward spacings.
NullLimit null_limit(const HFunction& h, double quad_tol = 1e-10);

// Perturbation direction L'(x) = l(x) of a local alternative
// F_n(x) = x + L_n(x)/n^{1/4} with L(0) = L(1) = 0 (so l integrates to 0).
struct LocalAlternative {
  RealFn l;
  static LocalAlternative from_derivative(RealFn l, double check_tol = 1e-7);
};

// Folded perturbation seen by the centre-outward ranks:
// l*(x) = l((1+x)/2) - l((1-x)/2).
RealFn co_perturbation(RealFn l);

// Efficacy  e(h) = (int l^2) Cov[h(Z),(Z-2)^2] / (2 sigma_h).
// Pass l for usual spacings and co_perturbation(l) for the CO variant.
double efficacy(const HFunction& h, const RealFn& l, double quad_tol = 1e-10);

struct EfficacyReport {
  double value = 0.0;
  double quadrature_error = 0.0;  // crude bound from the component integrals
};

EfficacyReport efficacy_report(const HFunction& h, const RealFn& l,
                               double quad_tol = 1e-10);

// The efficacy-ratio comparison of two statistics under the same direction.
// Both the plain ratio and its square are reported; the ordering (which is
// all downstream checks use) is the same either way.
struct AreReport {
  double efficacy_1 = 0.0;
  double efficacy_2 = 0.0;
  double efficacy_ratio = 0.0;          // e(h1)/e(h2)
  double efficacy_ratio_squared = 0.0;  // (e(h1)/e(h2))^2
};

AreReport pitman_are(const HFunction& h1, const HFunction& h2, const RealFn& l,
                     double quad_tol = 1e-10);

// Mean of the normal limit of sqrt(n)(W - E h(Z)) under F_n:
//   usual: (1/2)(int l^2) Cov[h(Z),(Z-2)^2]
//   CO:    same with L*'(y) = (l((1+y)/2) + l((1-y)/2))/2 in place of l.
double local_alternative_mean(const HFunction& h, const RealFn& l,
                              bool centre_outward, double quad_tol = 1e-10);

// Hellinger distance sqrt(1 - int sqrt(f1 f2)) over [0,1]. The radicand is
// clamped against roundoff; breakpoints mark interior joints of f1*f2.
double hellinger(const RealFn& f1, const RealFn& f2,
                 std::span<const double> breakpoints = {},
                 double quad_tol = 1e-10, double* error_bound = nullptr);

// Density of the centre-outward rank R = |2X - 1| when X ~ family:
// f_R(y) = (f((1+y)/2) + f((1-y)/2)) / 2.
RealFn co_density(const AlternativeFamily& family);

struct HellingerResult {
  double hd_direct = 0.0;  // HD(uniform, F)
  double hd_co = 0.0;      // HD(uniform, F_R)
  double quadrature_error_bound = 0.0;
};

// Both distances for one family; hd_co <= hd_direct + error bound, with
// equality when the family is symmetric about 1/2.
HellingerResult hellinger_vs_uniform(const AlternativeFamily& family,
                                     double quad_tol = 1e-10);

}  // namespace sgof

#endif  // SGOF_ASYMPTOTICS_HPP
