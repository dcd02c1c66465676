#include "ossfield/quadrature.hpp"

#include <cmath>

namespace ossf {
namespace quadrature {

namespace {

// Nodes/weights for 15-point Gauss-Legendre on [-1, 1].
constexpr int kOrder = 15;
constexpr double kNodes[kOrder] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601700, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601700,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kWeights[kOrder] = {
    0.03075324199611727, 0.07036604748810812, 0.10715922046717194,
    0.13957067792615432, 0.16626920581699392, 0.18616100001556220,
    0.19843148532711158, 0.20257824192556127, 0.19843148532711158,
    0.18616100001556220, 0.16626920581699392, 0.13957067792615432,
    0.10715922046717194, 0.07036604748810812, 0.03075324199611727};

double adaptive_impl(const std::function<double(double)>& f, double a, double b,
                     double tol, double whole, int depth, int max_depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss15(f, a, mid);
  const double right = gauss15(f, mid, b);
  const double err = std::abs(left + right - whole);
  if (err <= tol || depth >= max_depth) return left + right;
  return adaptive_impl(f, a, mid, 0.5 * tol, left, depth + 1, max_depth) +
         adaptive_impl(f, mid, b, 0.5 * tol, right, depth + 1, max_depth);
}

}  // namespace

double gauss15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kOrder; ++i) sum += kWeights[i] * f(c + h * kNodes[i]);
  return h * sum;
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double abs_tol, int max_depth) {
  if (!(b > a)) return 0.0;
  return adaptive_impl(f, a, b, abs_tol, gauss15(f, a, b), 0, max_depth);
}

}  // namespace quadrature
}  // namespace ossf
