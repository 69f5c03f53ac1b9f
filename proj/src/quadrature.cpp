#include "sgof/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace sgof {

namespace {

// 15-point Kronrod nodes and weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants).
constexpr double kNodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kKronrodW[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kGaussW[4] = {0.1294849661688697, 0.2797053914892767,
                               0.3818300505051189, 0.4179591836734694};

struct Panel {
  double a, b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  // A node can collide with an integrable pole only when rounding absorbs
  // the offset (panels ~1e-14 of the pole's magnitude); by then the panel's
  // true mass is below any tolerance we run at, so the pole reads as 0.
  auto fv = [&f](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : 0.0;
  };
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = fv(center);
  double kronrod = kKronrodW[7] * fc;
  double gauss = kGaussW[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double fsum = fv(center - dx) + fv(center + dx);
    kronrod += kKronrodW[i] * fsum;
    if (i % 2 == 1) gauss += kGaussW[i / 2] * fsum;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  p.error = std::fabs((kronrod - gauss) * half);
  return p;
}

QuadResult adaptive(const std::function<double(double)>& f,
                    std::span<const double> points, double abs_tol,
                    int max_panels) {
  std::priority_queue<Panel> queue;
  double total = 0.0;
  double total_err = 0.0;
  int panels = 0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i] < points[i + 1])) {
      throw std::invalid_argument("integrate: segment endpoints must increase");
    }
    Panel p = evaluate_panel(f, points[i], points[i + 1]);
    total += p.value;
    total_err += p.error;
    queue.push(p);
    ++panels;
  }

  while (total_err > abs_tol && panels < max_panels) {
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval at machine resolution; nothing more to refine here
      total_err -= worst.error;
      continue;
    }
    Panel left = evaluate_panel(f, worst.a, mid);
    Panel right = evaluate_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }

  QuadResult out;
  out.value = total;
  out.error = total_err;
  out.converged = total_err <= abs_tol;
  out.panels = panels;
  return out;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_panels) {
  const double pts[2] = {a, b};
  return adaptive(f, pts, abs_tol, max_panels);
}

QuadResult integrate_segments(const std::function<double(double)>& f,
                              std::span<const double> points, double abs_tol,
                              int max_panels) {
  if (points.size() < 2) throw std::invalid_argument("integrate: need >= 2 points");
  return adaptive(f, points, abs_tol, max_panels);
}

QuadResult integrate_exponential_weight(const std::function<double(double)>& f,
                                        double abs_tol, int max_panels) {
  // Direct integration with the explicit weight on (0, 120]; the truncated
  // tail is below e^{-120} z^k for any moderate power, far under tolerance.
  auto g = [&f](double z) { return f(z) * std::exp(-z); };
  const double pts[9] = {0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 120.0};
  return adaptive(g, pts, abs_tol, max_panels);
}

}  // namespace sgof
