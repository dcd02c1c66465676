#pragma once

#include <functional>

#include "ossfield/errors.hpp"

namespace ossf {
namespace quadrature {

// 15-point Gauss-Legendre on [a, b].
double gauss15(const std::function<double(double)>& f, double a, double b);

// Adaptive panel bisection: a panel is accepted when gauss15 and the sum of
// its two halves agree to abs_tol scaled by the panel fraction.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double abs_tol, int max_depth = 40);

}  // namespace quadrature
}  // namespace ossf
