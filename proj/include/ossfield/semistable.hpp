#pragma once

#include <complex>
#include <vector>

#include "ossfield/errors.hpp"

namespace ossf {
namespace semistable {

// The discrete Levy measure phi({b^k}) = c0^{-k}, k in Z, truncated to
// |k| <= K.  Requires b, c0 > 1 with alpha = log(c0)/log(b) in (0, 1).
struct SemistableSpec {
  double b = 4.0;
  double c0 = 2.0;
  int truncation = 50;  // K

  SemistableSpec() = default;
  SemistableSpec(double b_, double c0_, int k);

  double alpha() const;
  // Upper bound on the truncation error of psi at theta, decreasing
  // geometrically in K.
  double tail_bound(double theta) const;
};

struct PsiValue {
  std::complex<double> value;
  double tail_bound = 0.0;
};

// psi(theta) = sum_{|k|<=K} (e^{i theta b^k} - 1) c0^{-k}.
PsiValue psi(double theta, const SemistableSpec& spec);

struct LatticeReport {
  double max_residual = 0.0;   // max |psi(b theta) - c0 psi(theta)|
  double bound = 0.0;          // combined truncation bound over the grid
  double worst_theta = 0.0;
  bool passed = false;
};

// Verifies the lattice identity psi(b theta) = c0 psi(theta) up to the
// truncation bounds.
LatticeReport lattice_scaling_check(const SemistableSpec& spec,
                                    const std::vector<double>& theta_grid,
                                    double tol);

struct WitnessReport {
  double max_deviation = 0.0;  // max |c psi(theta) - psi(c^{1/alpha} theta)|
  double bound = 0.0;          // truncation bound at the maximizing theta
  double worst_theta = 0.0;
  bool certified = false;      // deviation exceeds the bound, so it is real
};

// Residual sweep of theta -> |c psi(theta) - psi(c^{1/alpha} theta)| with
// no lattice guard; on the lattice (c = c0^k) the deviation collapses to
// the truncation bound.
WitnessReport scaling_deviation(const SemistableSpec& spec, double c,
                                const std::vector<double>& theta_grid);

// Off-lattice scaling failure: for c not a power of c0, the deviation
// |c psi(theta) - psi(c^{1/alpha} theta)| stays strictly positive.
// Lattice values of c are rejected with a domain error.
WitnessReport oss_failure_witness(const SemistableSpec& spec, double c,
                                  const std::vector<double>& theta_grid);

}  // namespace semistable
}  // namespace ossf
