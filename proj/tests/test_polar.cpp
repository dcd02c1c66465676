#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ossfield/matlin.hpp"
#include "ossfield/polar.hpp"
#include "ossfield/rng.hpp"

using ossf::Matrix;
using ossf::Vector;
using namespace ossf::polar;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// Random exponent with spectrum bounded away from the imaginary axis:
// 0.5 I plus a contraction-scaled perturbation.
Matrix random_exponent(ossf::rng::CounterStream& stream, Eigen::Index n) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = 2.0 * stream.next_uniform() - 1.0;
  return 0.75 * Matrix::Identity(n, n) + 0.2 * m;
}

}  // namespace

TEST_CASE("e_norm closed forms") {
  // E = I: int_0^1 t ||x|| dt/t = ||x||, for every base norm.
  for (BaseNorm base : {BaseNorm::kEuclidean, BaseNorm::kMax, BaseNorm::kOne}) {
    PolarConfig cfg(Matrix::Identity(2, 2), base);
    const Vector x = vec2(3.0, -4.0);
    const double expected = base == BaseNorm::kEuclidean ? 5.0
                            : base == BaseNorm::kMax     ? 4.0
                                                         : 7.0;
    CHECK(e_norm(x, cfg) == doctest::Approx(expected).epsilon(1e-10));
  }

  // E = h I: ||x||_0 = ||x|| / h.
  for (double h : {0.3, 1.0, 1.7}) {
    PolarConfig cfg(h * Matrix::Identity(2, 2));
    CHECK(e_norm(vec2(3.0, 4.0), cfg) == doctest::Approx(5.0 / h).epsilon(1e-10));
  }

  // E = diag(1, 2): ||(a, 0)||_0 = |a|, ||(0, s)||_0 = |s| / 2.
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 1.0, 2.0;
  PolarConfig cfg(d);
  CHECK(e_norm(vec2(2.5, 0.0), cfg) == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(e_norm(vec2(0.0, 4.0), cfg) == doctest::Approx(2.0).epsilon(1e-10));
  // General vector: int_0^1 sqrt(a^2 t^2 + s^2 t^4) dt/t, here a = s = 1:
  // int_0^1 sqrt(1 + t^2) dt = (sqrt(2) + asinh(1)) / 2.
  const double expected = 0.5 * (std::sqrt(2.0) + std::asinh(1.0));
  CHECK(e_norm(vec2(1.0, 1.0), cfg) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("e_norm is a norm along rays and under rotation invariance") {
  Matrix j(2, 2);
  j << 0.0, -1.0, 1.0, 0.0;
  PolarConfig cfg(0.5 * Matrix::Identity(2, 2) + 0.3 * j);
  const Vector x = vec2(1.0, 2.0);
  const double base = e_norm(x, cfg);
  CHECK(e_norm(3.0 * x, cfg) == doctest::Approx(3.0 * base).epsilon(1e-9));
  CHECK(e_norm(-x, cfg) == doctest::Approx(base).epsilon(1e-9));

  // h I + theta J commutes with rotations and the Euclidean norm is
  // rotation invariant, so ||R x||_0 = ||x||_0.
  const Matrix r = ossf::matlin::expm(1.1 * j);
  CHECK(e_norm(r * x, cfg) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("polar_decompose closed forms") {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 1.0, 2.0;
  PolarConfig cfg(d);

  auto pc = polar_decompose(vec2(0.0, 4.0), cfg);
  CHECK(pc.radial == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(pc.directional(0) == doctest::Approx(0.0));
  CHECK(pc.directional(1) == doctest::Approx(2.0).epsilon(1e-10));

  auto pa = polar_decompose(vec2(3.0, 0.0), cfg);
  CHECK(pa.radial == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(pa.directional(0) == doctest::Approx(1.0).epsilon(1e-10));

  // E = h I: tau = (||x|| / h)^{1/h}, l = x / ||tau^E x... || i.e. direction
  // with ||l|| = h.
  const double h = 0.4;
  PolarConfig ch(h * Matrix::Identity(2, 2));
  auto ph = polar_decompose(vec2(0.0, 7.0), ch);
  CHECK(ph.radial == doctest::Approx(std::pow(7.0 / h, 1.0 / h)).epsilon(1e-9));
  CHECK(ph.directional.norm() == doctest::Approx(h).epsilon(1e-9));
}

TEST_CASE("polar round trip and homogeneity on random data") {
  ossf::rng::CounterStream stream(314, 1);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(stream.next_u64() % 2);
    PolarConfig cfg(random_exponent(stream, n));
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i)
      x(i) = std::pow(10.0, 4.0 * stream.next_uniform() - 2.0) *
             (stream.next_uniform() < 0.5 ? -1.0 : 1.0);

    auto pc = polar_decompose(x, cfg);
    CHECK(pc.radial > 0.0);
    CHECK(e_norm(pc.directional, cfg) == doctest::Approx(1.0).epsilon(1e-8));
    const Vector back = polar_compose(pc.radial, pc.directional, cfg);
    CHECK((back - x).norm() <= 1e-8 * x.norm());

    // tau(c^E x) = c tau(x), l(c^E x) = l(x).
    const double c = std::pow(10.0, 2.0 * stream.next_uniform() - 1.0);
    const Vector scaled = ossf::matlin::mat_power(cfg.exponent(), c) * x;
    auto ps = polar_decompose(scaled, cfg);
    CHECK(ps.radial == doctest::Approx(c * pc.radial).epsilon(1e-7));
    CHECK((ps.directional - pc.directional).norm() <= 1e-6);
  }
}

TEST_CASE("polar validation and domain errors") {
  PolarConfig cfg(Matrix::Identity(2, 2));
  CHECK_THROWS_AS(polar_decompose(vec2(0.0, 0.0), cfg), ossf::DomainError);
  CHECK_THROWS_AS(polar_compose(-1.0, vec2(1.0, 0.0), cfg), ossf::DomainError);
  CHECK_THROWS_AS(polar_compose(1.0, vec2(2.0, 0.0), cfg), ossf::ValidationError);
  CHECK_THROWS_AS(e_norm(Vector(3).setOnes(), cfg), ossf::ValidationError);

  // Exponent with a non-positive eigenvalue is rejected at construction.
  Matrix bad = Matrix::Zero(2, 2);
  bad.diagonal() << 1.0, -0.5;
  CHECK_THROWS_AS((void)PolarConfig(bad), ossf::DomainError);
  CHECK_THROWS_AS((void)PolarConfig(Matrix::Zero(2, 2)), ossf::DomainError);
}
