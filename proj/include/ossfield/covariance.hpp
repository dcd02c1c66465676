#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ossfield/matlin.hpp"

namespace ossf {
namespace covariance {

// Tuning knobs for the 2-D spectral-density quadrature behind ofbf_cov.
struct QuadConfig {
  // Radial cutoff in units of phase: integrate rho up to R with R*|v| =
  // cutoff_phase, then add the analytic tail (constant part exactly,
  // oscillatory part by stationary-phase asymptotics).
  double cutoff_phase = 300.0;
  int min_angular = 64;    // angular trapezoid nodes at small phase
  double small_phase = 0.01;  // below this, use the series expansion near 0
};

enum class CovKind { kOfbfIsotropic, kClosedFormFbf, kUserTable };

// A covariance function (s,t) -> n x n matrix.
struct CovarianceModel {
  Eigen::Index domain_dim = 2;
  Eigen::Index range_dim = 2;
  CovKind kind = CovKind::kOfbfIsotropic;
  double gamma = 3.0;  // meaningful for the OFBF kinds
  std::function<Matrix(const Vector&, const Vector&)> eval;
};

struct OssCheckReport {
  double max_abs_deviation = 0.0;
  double max_rel_deviation = 0.0;
  Vector worst_s, worst_t;
  double tolerance = 0.0;
  bool passed = false;
};

// F(v) = int_{R^2} (1 - cos<v,x>) ||x||^{-gamma} dx by polar-coordinate
// quadrature: periodic trapezoid in angle, graded panels in radius,
// analytic tail.  Requires 2 < gamma < 4.
double structure_integral(const Vector& v, double gamma,
                          const QuadConfig& quad = {});

// OFBF covariance of a field with spectral density ||x||^{-gamma} I:
// Gamma(s,t) = I * [F(s) + F(t) - F(s-t)].
Matrix ofbf_cov(const Vector& s, const Vector& t, double gamma,
                const QuadConfig& quad = {});

// Normalization c(gamma) with F(v) = c(gamma) ||v||^{2h}, h = (gamma-2)/2,
// computed by 1-D radial quadrature of the Bessel-averaged integrand.
// Cached per gamma; independent of the 2-D path above.
double c_gamma(double gamma);

// Oracle form: I * c_gamma * (||s||^{2h} + ||t||^{2h} - ||s-t||^{2h}).
Matrix fbf_closed_form(const Vector& s, const Vector& t, double gamma,
                       double c_gamma_value);

CovarianceModel make_ofbf_model(double gamma, const QuadConfig& quad = {});
CovarianceModel make_fbf_closed_form_model(double gamma);
// Exact-lookup table model; queries off the tabulated points are errors.
CovarianceModel make_user_table_model(
    Eigen::Index domain_dim, std::vector<Vector> points,
    std::vector<std::vector<Matrix>> blocks);

// Max deviation of Gamma(c^E s, c^E t) - c^H Gamma(s,t) (c^H)^T over all
// ordered grid pairs; relative to the largest ||c^H Gamma (c^H)^T||.
OssCheckReport cov_oss_check(const CovarianceModel& model, const Matrix& E,
                             const Matrix& H, double c,
                             const std::vector<Vector>& grid, double tol);

// Gamma(A s, A t) vs Gamma(s, t).
OssCheckReport dom_symmetry_check(const CovarianceModel& model, const Matrix& A,
                                  const std::vector<Vector>& grid, double tol);

// B Gamma(s,t) B^T vs Gamma(s,t).
OssCheckReport ran_symmetry_check(const CovarianceModel& model, const Matrix& B,
                                  const std::vector<Vector>& grid, double tol);

}  // namespace covariance
}  // namespace ossf
