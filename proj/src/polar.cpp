#include "ossfield/polar.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "ossfield/quadrature.hpp"

namespace ossf {
namespace polar {

namespace {

double base_norm_of(const Vector& v, BaseNorm kind) {
  switch (kind) {
    case BaseNorm::kEuclidean:
      return v.norm();
    case BaseNorm::kMax:
      return v.lpNorm<Eigen::Infinity>();
    case BaseNorm::kOne:
      return v.lpNorm<1>();
  }
  return v.norm();
}

constexpr double kSphereValidationTol = 1e-6;

}  // namespace

PolarConfig::PolarConfig(Matrix exponent, BaseNorm base_norm, double root_tol)
    : exponent_(std::move(exponent)), base_norm_(base_norm), root_tol_(root_tol) {
  matlin::validate_square(exponent_, "polar exponent");
  if (!(root_tol_ > 0.0)) throw ValidationError("root_tol must be positive");
  const auto spec = matlin::spectrum(exponent_);
  if (!spec.all_positive) {
    throw DomainError(
        "polar coordinates need a positive-stable exponent; min eigenvalue "
        "real part is " +
        std::to_string(spec.min_real_part));
  }
  min_real_part_ = spec.min_real_part;
}

double e_norm(const Vector& x, const PolarConfig& cfg) {
  if (x.size() != cfg.exponent().rows()) {
    throw ValidationError("e_norm: vector/exponent dimension mismatch");
  }
  if (!x.allFinite()) throw ValidationError("e_norm: non-finite vector");
  if (x.isZero(0.0)) return 0.0;

  const Matrix& e = cfg.exponent();
  const double lambda = cfg.min_spectral_gap();
  auto integrand = [&](double u) {
    return base_norm_of((-u * e).exp() * x, cfg.base_norm());
  };

  // ||e^{-uE} x|| decays like e^{-lambda u} up to a polynomial factor; push
  // the cutoff out until the integrand itself is negligible.
  const double f0 = integrand(0.0);
  double cutoff = 5.0 / lambda;
  while (integrand(cutoff) > 1e-16 * f0 && cutoff < 2000.0 / lambda) {
    cutoff *= 1.5;
  }
  const double scale = std::max(f0, integrand(1.0 / lambda)) / lambda;
  return quadrature::adaptive(integrand, 0.0, cutoff, 1e-13 * scale);
}

PolarCoords polar_decompose(const Vector& x, const PolarConfig& cfg) {
  if (x.size() != cfg.exponent().rows()) {
    throw ValidationError("polar_decompose: vector/exponent dimension mismatch");
  }
  if (!x.allFinite()) throw ValidationError("polar_decompose: non-finite vector");
  if (x.isZero(0.0)) {
    throw DomainError("polar_decompose is undefined at x = 0");
  }

  const Matrix& e = cfg.exponent();
  // g(r) = ||r^{-E} x||_0 - 1, strictly decreasing in r.
  auto g = [&](double r) {
    return e_norm((-std::log(r) * e).exp() * x, cfg) - 1.0;
  };

  double lo = 1.0, hi = 1.0;
  double g_lo = g(1.0), g_hi = g_lo;
  for (int k = 0; g_lo < 0.0; ++k) {
    if (k > 200) throw NumericError("polar_decompose: bracketing failed (low)");
    hi = lo;
    g_hi = g_lo;
    lo *= 0.5;
    g_lo = g(lo);
  }
  for (int k = 0; g_hi > 0.0; ++k) {
    if (k > 200) throw NumericError("polar_decompose: bracketing failed (high)");
    lo = hi;
    g_lo = g_hi;
    hi *= 2.0;
    g_hi = g(hi);
  }

  // Bisection, with early exit once the bracket is below root_tol.
  double mid = 0.5 * (lo + hi), g_mid = 0.0;
  for (int it = 0; it < 80; ++it) {
    mid = 0.5 * (lo + hi);
    if (hi - lo <= cfg.root_tol() * std::max(1.0, mid)) break;
    g_mid = g(mid);
    if (g_mid >= 0.0) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
  }
  // Secant polish on the final bracket.
  double tau = mid;
  if (g_lo != g_hi) {
    const double secant = lo + (hi - lo) * g_lo / (g_lo - g_hi);
    if (secant > 0.0 && std::isfinite(secant)) tau = secant;
  }

  PolarCoords out;
  out.radial = tau;
  out.directional = (-std::log(tau) * e).exp() * x;
  return out;
}

Vector polar_compose(double r, const Vector& theta, const PolarConfig& cfg) {
  if (theta.size() != cfg.exponent().rows()) {
    throw ValidationError("polar_compose: vector/exponent dimension mismatch");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("polar_compose requires r > 0");
  }
  const double n0 = e_norm(theta, cfg);
  if (std::abs(n0 - 1.0) > kSphereValidationTol) {
    throw ValidationError("polar_compose: theta is not on the unit sphere (||theta||_0 = " +
                          std::to_string(n0) + ")");
  }
  return (std::log(r) * cfg.exponent()).exp() * theta;
}

}  // namespace polar
}  // namespace ossf
