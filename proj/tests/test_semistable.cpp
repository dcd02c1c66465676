#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ossfield/semistable.hpp"

using namespace ossf::semistable;

namespace {

std::vector<double> theta_grid(int n = 41, double lo = 0.05, double hi = 2.0) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i)
    g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

// Direct reimplementation of the truncated sum, written the naive way; the
// library version uses 1 - cos = 2 sin^2 for accuracy, so agreement at
// moderate K is a genuine cross-check.
std::complex<double> psi_naive(double theta, const SemistableSpec& spec) {
  std::complex<double> acc = 0.0;
  for (int k = -spec.truncation; k <= spec.truncation; ++k) {
    const double x = theta * std::pow(spec.b, k);
    acc += (std::complex<double>(std::cos(x) - 1.0, std::sin(x))) *
           std::pow(spec.c0, -k);
  }
  return acc;
}

}  // namespace

TEST_CASE("spec validation and alpha") {
  SemistableSpec spec;
  CHECK(spec.alpha() == doctest::Approx(0.5));
  CHECK(SemistableSpec(8.0, 2.0, 30).alpha() == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS((void)SemistableSpec(1.0, 2.0, 30), ossf::DomainError);
  CHECK_THROWS_AS((void)SemistableSpec(4.0, 0.9, 30), ossf::DomainError);
  // alpha must stay below 1: c0 >= b is rejected.
  CHECK_THROWS_AS((void)SemistableSpec(2.0, 4.0, 30), ossf::DomainError);
  CHECK_THROWS_AS((void)SemistableSpec(4.0, 2.0, 0), ossf::ValidationError);
}

TEST_CASE("psi against the naive oracle") {
  SemistableSpec spec;
  for (double theta : theta_grid(21, 0.01, 5.0)) {
    const auto v = psi(theta, spec);
    const auto w = psi_naive(theta, spec);
    CHECK(std::abs(v.value - w) < 1e-10 * std::max(1.0, std::abs(w)));
    CHECK(v.tail_bound > 0.0);
  }
  CHECK(psi(0.0, spec).value == std::complex<double>(0.0, 0.0));
  // psi(-theta) is the conjugate.
  const auto p = psi(1.3, spec), m = psi(-1.3, spec);
  CHECK(std::abs(m.value - std::conj(p.value)) < 1e-14);
}

TEST_CASE("truncation self-consistency: K = 40 vs K = 60 within bounds") {
  SemistableSpec k40(4.0, 2.0, 40), k60(4.0, 2.0, 60);
  for (double theta : theta_grid()) {
    const auto a = psi(theta, k40);
    const auto b = psi(theta, k60);
    CHECK(std::abs(a.value - b.value) <= a.tail_bound + b.tail_bound);
  }
}

TEST_CASE("lattice identity holds within the truncation bound") {
  SemistableSpec spec;
  auto rep = lattice_scaling_check(spec, theta_grid(), 0.0);
  CHECK(rep.passed);
  CHECK(rep.max_residual <= rep.bound);

  // Larger K shrinks both residual and bound.
  auto rep80 = lattice_scaling_check(SemistableSpec(4.0, 2.0, 80), theta_grid(),
                                     0.0);
  CHECK(rep80.bound < rep.bound);
  CHECK(rep80.max_residual <= rep80.bound);
}

TEST_CASE("scaling_deviation collapses on the lattice, not off it") {
  SemistableSpec spec;
  // c = c0: lattice value, deviation within the truncation bound.
  auto on = scaling_deviation(spec, spec.c0, theta_grid());
  CHECK(on.max_deviation <= on.bound);
  CHECK_FALSE(on.certified);

  auto off = scaling_deviation(spec, 1.5, theta_grid());
  CHECK(off.certified);
  CHECK(off.max_deviation > 10.0 * off.bound);
}

TEST_CASE("oss_failure_witness") {
  SemistableSpec spec;
  auto rep = oss_failure_witness(spec, 1.5, theta_grid());
  CHECK(rep.certified);
  CHECK(rep.max_deviation > 10.0 * rep.bound);
  CHECK(rep.worst_theta > 0.0);

  // Lattice values of c (powers of c0 = 2) are rejected.
  CHECK_THROWS_AS((void)oss_failure_witness(spec, 2.0, theta_grid()),
                  ossf::DomainError);
  CHECK_THROWS_AS((void)oss_failure_witness(spec, 4.0, theta_grid()),
                  ossf::DomainError);
  CHECK_THROWS_AS((void)oss_failure_witness(spec, 0.5, theta_grid()),
                  ossf::DomainError);
  CHECK_THROWS_AS((void)oss_failure_witness(spec, -1.5, theta_grid()),
                  ossf::DomainError);
}
