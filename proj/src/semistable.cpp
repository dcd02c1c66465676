#include "ossfield/semistable.hpp"

#include <cmath>

namespace ossf {
namespace semistable {

WitnessReport scaling_deviation(const SemistableSpec& spec, double c,
                                const std::vector<double>& theta_grid) {
  WitnessReport rep;
  const double stretch = std::pow(c, 1.0 / spec.alpha());
  for (double theta : theta_grid) {
    const PsiValue lhs = psi(theta, spec);
    const PsiValue rhs = psi(stretch * theta, spec);
    const double dev = std::abs(c * lhs.value - rhs.value);
    if (dev >= rep.max_deviation) {
      rep.max_deviation = dev;
      rep.worst_theta = theta;
      rep.bound = c * lhs.tail_bound + rhs.tail_bound;
    }
  }
  rep.certified = rep.max_deviation > rep.bound;
  return rep;
}

SemistableSpec::SemistableSpec(double b_, double c0_, int k)
    : b(b_), c0(c0_), truncation(k) {
  if (!(b > 1.0) || !(c0 > 1.0)) {
    throw DomainError("semistable spec requires b > 1 and c0 > 1");
  }
  if (!(alpha() > 0.0 && alpha() < 1.0)) {
    throw DomainError("semistable spec requires alpha = log(c0)/log(b) in (0,1)");
  }
  if (truncation < 1) throw ValidationError("truncation K must be >= 1");
}

double SemistableSpec::alpha() const { return std::log(c0) / std::log(b); }

double SemistableSpec::tail_bound(double theta) const {
  const double k = static_cast<double>(truncation);
  const double upper = 2.0 * std::pow(c0, -k) / (1.0 - 1.0 / c0);
  const double decay = 1.0 - alpha();
  const double lower = std::abs(theta) * std::pow(b, -k * decay) /
                       (1.0 - std::pow(b, -decay));
  return upper + lower;
}

PsiValue psi(double theta, const SemistableSpec& spec) {
  PsiValue out;
  out.tail_bound = spec.tail_bound(theta);
  double re = 0.0, im = 0.0;
  for (int k = -spec.truncation; k <= spec.truncation; ++k) {
    const double y = std::pow(spec.b, k);
    const double weight = std::pow(spec.c0, -k);
    const double half = std::sin(0.5 * theta * y);
    re += -2.0 * half * half * weight;  // cos(x) - 1 without cancellation
    im += std::sin(theta * y) * weight;
  }
  out.value = {re, im};
  return out;
}

LatticeReport lattice_scaling_check(const SemistableSpec& spec,
                                    const std::vector<double>& theta_grid,
                                    double tol) {
  LatticeReport rep;
  for (double theta : theta_grid) {
    const PsiValue lhs = psi(spec.b * theta, spec);
    const PsiValue rhs = psi(theta, spec);
    const double residual = std::abs(lhs.value - spec.c0 * rhs.value);
    if (residual >= rep.max_residual) {
      rep.max_residual = residual;
      rep.worst_theta = theta;
    }
    rep.bound = std::max(rep.bound, lhs.tail_bound + spec.c0 * rhs.tail_bound);
  }
  rep.passed = rep.max_residual <= rep.bound + tol;
  return rep;
}

WitnessReport oss_failure_witness(const SemistableSpec& spec, double c,
                                  const std::vector<double>& theta_grid) {
  if (!(c > 0.0)) throw DomainError("witness requires c > 0");
  const double on_lattice = std::log(c) / std::log(spec.c0);
  if (std::abs(on_lattice - std::round(on_lattice)) <= 1e-9) {
    throw DomainError(
        "c = " + std::to_string(c) +
        " lies on the scaling lattice c0^k; pick an off-lattice c");
  }
  return scaling_deviation(spec, c, theta_grid);
}

}  // namespace semistable
}  // namespace ossf
