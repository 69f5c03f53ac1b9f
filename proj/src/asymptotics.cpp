#include "sgof/asymptotics.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sgof {

namespace {

constexpr int kMomentPanels = 60000;

double clamp01(double x) {
  if (x < 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  return x;
}

}  // namespace

ExpMoments exp_moments(const HFunction& h, double quad_tol) {
  const double tol = quad_tol / 6.0;  // six integrals feed the four moments
  auto weighted = [&](const std::function<double(double)>& f) {
    const QuadResult r = integrate_exponential_weight(f, tol, kMomentPanels);
    if (!r.converged || !std::isfinite(r.value)) {
      throw std::runtime_error("exp_moments: quadrature failed for h = " + h.name());
    }
    return r.value;
  };

  const double eh = weighted([&h](double z) { return h(z); });
  const double eh2 = weighted([&h](double z) { const double v = h(z); return v * v; });
  const double ehz = weighted([&h](double z) { return h(z) * z; });
  const double ehq = weighted([&h](double z) {
    const double d = z - 2.0;
    return h(z) * d * d;
  });

  ExpMoments m;
  m.mean_h = eh;
  m.var_h = eh2 - eh * eh;
  m.cov_h_z = ehz - eh;             // E Z = 1
  m.cov_h_quad = ehq - 2.0 * eh;    // E (Z-2)^2 = 2
  return m;
}

NullLimit null_limit(const HFunction& h, double quad_tol) {
  const ExpMoments m = exp_moments(h, quad_tol);
  return NullLimit{m.mean_h, m.null_variance()};
}

LocalAlternative LocalAlternative::from_derivative(RealFn l, double check_tol) {
  if (!l) throw std::invalid_argument("LocalAlternative: empty function");
  const QuadResult r = integrate(l, 0.0, 1.0, check_tol / 10.0);
  if (std::fabs(r.value) > check_tol) {
    throw std::invalid_argument(
        "LocalAlternative: l must integrate to 0 over [0,1] (L(0) = L(1) = 0)");
  }
  return LocalAlternative{std::move(l)};
}

RealFn co_perturbation(RealFn l) {
  return [l = std::move(l)](double x) {
    return l(0.5 * (1.0 + x)) - l(0.5 * (1.0 - x));
  };
}

double efficacy(const HFunction& h, const RealFn& l, double quad_tol) {
  const ExpMoments m = exp_moments(h, quad_tol);
  const double sigma2 = m.null_variance();
  if (!(sigma2 > 0.0)) {
    throw std::domain_error("efficacy: degenerate null variance (affine h)");
  }
  const QuadResult l2 = integrate([&l](double u) { const double v = l(u); return v * v; },
                                  0.0, 1.0, quad_tol);
  return l2.value * m.cov_h_quad / (2.0 * std::sqrt(sigma2));
}

EfficacyReport efficacy_report(const HFunction& h, const RealFn& l,
                               double quad_tol) {
  const ExpMoments m = exp_moments(h, quad_tol);
  const double sigma2 = m.null_variance();
  if (!(sigma2 > 0.0)) {
    throw std::domain_error("efficacy: degenerate null variance (affine h)");
  }
  const QuadResult l2 = integrate([&l](double u) { const double v = l(u); return v * v; },
                                  0.0, 1.0, quad_tol);
  const double sigma = std::sqrt(sigma2);
  EfficacyReport out;
  out.value = l2.value * m.cov_h_quad / (2.0 * sigma);
  out.quadrature_error =
      l2.error * std::fabs(m.cov_h_quad) / (2.0 * sigma) + quad_tol;
  return out;
}

AreReport pitman_are(const HFunction& h1, const HFunction& h2, const RealFn& l,
                     double quad_tol) {
  AreReport out;
  out.efficacy_1 = efficacy(h1, l, quad_tol);
  out.efficacy_2 = efficacy(h2, l, quad_tol);
  if (out.efficacy_2 == 0.0) {
    throw std::domain_error("pitman_are: zero denominator efficacy");
  }
  out.efficacy_ratio = out.efficacy_1 / out.efficacy_2;
  out.efficacy_ratio_squared = out.efficacy_ratio * out.efficacy_ratio;
  return out;
}

double local_alternative_mean(const HFunction& h, const RealFn& l,
                              bool centre_outward, double quad_tol) {
  const ExpMoments m = exp_moments(h, quad_tol);
  RealFn direction;
  if (centre_outward) {
    // d/dy L*(y) with L*(y) = L((1+y)/2) - L((1-y)/2)
    direction = [&l](double y) {
      return 0.5 * (l(0.5 * (1.0 + y)) + l(0.5 * (1.0 - y)));
    };
  } else {
    direction = l;
  }
  const QuadResult l2 = integrate(
      [&direction](double u) { const double v = direction(u); return v * v; },
      0.0, 1.0, quad_tol);
  return 0.5 * l2.value * m.cov_h_quad;
}

double hellinger(const RealFn& f1, const RealFn& f2,
                 std::span<const double> breakpoints, double quad_tol,
                 double* error_bound) {
  std::vector<double> pts;
  pts.push_back(0.0);
  for (double b : breakpoints) {
    if (b > 0.0 && b < 1.0) pts.push_back(b);
  }
  pts.push_back(1.0);

  auto integrand = [&f1, &f2](double x) {
    const double p = f1(x) * f2(x);
    return p > 0.0 ? std::sqrt(p) : 0.0;
  };
  const QuadResult r = integrate_segments(integrand, pts, quad_tol, kMomentPanels);
  if (!std::isfinite(r.value)) {
    throw std::runtime_error("hellinger: quadrature failed");
  }
  if (error_bound) *error_bound = r.error;
  double radicand = 1.0 - r.value;
  if (radicand < 0.0) {
    // roundoff: int sqrt(f1 f2) <= 1 analytically
    radicand = 0.0;
  }
  return std::sqrt(clamp01(radicand));
}

RealFn co_density(const AlternativeFamily& family) {
  return [family](double y) {
    return 0.5 * (family.pdf(0.5 * (1.0 + y)) + family.pdf(0.5 * (1.0 - y)));
  };
}

HellingerResult hellinger_vs_uniform(const AlternativeFamily& family,
                                     double quad_tol) {
  auto unit = [](double) { return 1.0; };
  auto direct = [&family](double x) { return family.pdf(x); };
  const auto folded = co_density(family);

  HellingerResult out;
  double err_direct = 0.0;
  double err_co = 0.0;
  out.hd_direct = hellinger(unit, direct, family.breakpoints(), quad_tol, &err_direct);
  // the fold moves every joint of the original density onto y in {0, 1}
  out.hd_co = hellinger(unit, folded, {}, quad_tol, &err_co);
  out.quadrature_error_bound = err_direct + err_co;
  return out;
}

}  // namespace sgof
