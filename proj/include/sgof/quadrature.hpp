#ifndef SGOF_QUADRATURE_HPP
#define SGOF_QUADRATURE_HPP

#include <functional>
#include <span>

namespace sgof {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error bound
  bool converged = false;
  int panels = 0;
};

// Adaptive Gauss-Kronrod 7-15 integration on (a, b). Nodes are strictly
// interior, so integrable endpoint singularities are fine as long as the
// singular point is an interval endpoint; pass breakpoints for interior
// joints (the C family's midpoint pole, for instance).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, int max_panels = 20000);

QuadResult integrate_segments(const std::function<double(double)>& f,
                              std::span<const double> points,
                              double abs_tol = 1e-10, int max_panels = 20000);

// Integral of f(z) e^{-z} over (0, inf) via the substitution t = 1 - e^{-z}.
QuadResult integrate_exponential_weight(const std::function<double(double)>& f,
                                        double abs_tol = 1e-10,
                                        int max_panels = 20000);

}  // namespace sgof

#endif  // SGOF_QUADRATURE_HPP
