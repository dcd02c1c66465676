#pragma once

#include "ossfield/matlin.hpp"

namespace ossf {
namespace polar {

enum class BaseNorm { kEuclidean, kMax, kOne };

// Polar coordinates with respect to a positive-stable exponent E.
// The norm ||x||_0 = int_0^1 ||t^E x||_* dt/t is finite exactly when every
// eigenvalue of E has positive real part; construction checks this.
class PolarConfig {
 public:
  explicit PolarConfig(Matrix exponent, BaseNorm base_norm = BaseNorm::kEuclidean,
                       double root_tol = 1e-12);

  const Matrix& exponent() const { return exponent_; }
  BaseNorm base_norm() const { return base_norm_; }
  double root_tol() const { return root_tol_; }
  double min_spectral_gap() const { return min_real_part_; }

 private:
  Matrix exponent_;
  BaseNorm base_norm_;
  double root_tol_;
  double min_real_part_;  // min Re of spectrum, > 0
};

struct PolarCoords {
  double radial = 0.0;  // tau_E(x)
  Vector directional;   // l_E(x), on the unit sphere of ||.||_0
};

// ||x||_0 via the substitution t = e^{-u}: int_0^U ||e^{-uE} x||_* du with
// the cutoff U chosen from the exponential decay of e^{-uE}.
double e_norm(const Vector& x, const PolarConfig& cfg);

// Unique (tau, l) with x = tau^E l and ||l||_0 = 1.  tau is the root of
// r -> ||r^{-E} x||_0 - 1, bracketed by doubling and closed by bisection
// with a secant polish.
PolarCoords polar_decompose(const Vector& x, const PolarConfig& cfg);

// r^E theta; inverse of polar_decompose.  theta must satisfy
// | ||theta||_0 - 1 | <= validation tolerance.
Vector polar_compose(double r, const Vector& theta, const PolarConfig& cfg);

}  // namespace polar
}  // namespace ossf
