#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ossfield/covariance.hpp"
#include "ossfield/matlin.hpp"
#include "ossfield/rng.hpp"

using ossf::Matrix;
using ossf::Vector;
using namespace ossf::covariance;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// Closed form for the normalization: c(gamma) = -2 pi 2^{1-gamma}
// Gamma(1 - gamma/2) / Gamma(gamma/2), positive on (2, 4).
double c_gamma_closed_form(double gamma) {
  return -2.0 * std::numbers::pi * std::pow(2.0, 1.0 - gamma) *
         std::tgamma(1.0 - gamma / 2.0) / std::tgamma(gamma / 2.0);
}

std::vector<Vector> sample_grid() {
  return {vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(0.6, -0.8), vec2(-2.0, 1.5),
          vec2(0.05, 0.02)};
}

}  // namespace

TEST_CASE("c_gamma matches the Gamma-function closed form") {
  for (double gamma : {2.2, 2.5, 3.0, 3.5, 3.8}) {
    CHECK(c_gamma(gamma) ==
          doctest::Approx(c_gamma_closed_form(gamma)).epsilon(1e-6));
    CHECK(c_gamma(gamma) > 0.0);
  }
}

TEST_CASE("structure_integral is the homogeneous closed form") {
  for (double gamma : {2.5, 3.0, 3.5}) {
    const double h = (gamma - 2.0) / 2.0;
    const double c = c_gamma_closed_form(gamma);
    for (const Vector& v :
         {vec2(1.0, 0.0), vec2(0.3, 0.4), vec2(-5.0, 2.0), vec2(0.01, 0.0),
          vec2(40.0, -9.0)}) {
      const double expected = c * std::pow(v.norm(), 2.0 * h);
      const double got = structure_integral(v, gamma);
      CHECK(got == doctest::Approx(expected).epsilon(2e-4));
    }
  }
}

TEST_CASE("structure_integral is rotation invariant and even") {
  const double gamma = 3.1;
  const double ref = structure_integral(vec2(1.3, 0.0), gamma);
  CHECK(structure_integral(vec2(0.0, 1.3), gamma) ==
        doctest::Approx(ref).epsilon(1e-8));
  CHECK(structure_integral(vec2(-1.3, 0.0), gamma) ==
        doctest::Approx(ref).epsilon(1e-12));
  const double s = 1.3 / std::sqrt(2.0);
  CHECK(structure_integral(vec2(s, s), gamma) ==
        doctest::Approx(ref).epsilon(1e-8));
  CHECK(structure_integral(vec2(0.0, 0.0), gamma) == doctest::Approx(0.0));
}

TEST_CASE("structure_integral rejects gamma outside (2, 4)") {
  CHECK_THROWS_AS(structure_integral(vec2(1.0, 0.0), 2.0), ossf::DomainError);
  CHECK_THROWS_AS(structure_integral(vec2(1.0, 0.0), 4.0), ossf::DomainError);
  CHECK_THROWS_AS(structure_integral(vec2(1.0, 0.0), 1.5), ossf::DomainError);
  CHECK_THROWS_AS(structure_integral(Vector(3).setOnes(), 3.0),
                  ossf::ValidationError);
}

TEST_CASE("ofbf_cov agrees with the closed-form oracle") {
  for (double gamma : {2.5, 3.0, 3.5}) {
    const double cg = c_gamma(gamma);
    for (const Vector& s : sample_grid()) {
      for (const Vector& t : sample_grid()) {
        const Matrix got = ofbf_cov(s, t, gamma);
        const Matrix want = fbf_closed_form(s, t, gamma, cg);
        const double scale = std::max(1e-12, want.norm());
        CHECK((got - want).norm() / scale < 1e-3);
        // Diagonal structure and symmetry of the quadrature route.
        CHECK(got(0, 1) == doctest::Approx(0.0));
        CHECK(got(0, 0) == doctest::Approx(got(1, 1)));
        CHECK((got - ofbf_cov(t, s, gamma)).norm() < 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("cov_oss_check passes the scaling law for the closed-form model") {
  Matrix j(2, 2);
  j << 0.0, -1.0, 1.0, 0.0;
  const double gamma = 3.0;
  const double h = (gamma - 2.0) / 2.0;
  auto model = make_fbf_closed_form_model(gamma);
  const auto grid = sample_grid();

  SUBCASE("E = I, H = h I") {
    for (double c : {0.5, 2.0, 10.0}) {
      auto rep = cov_oss_check(model, Matrix::Identity(2, 2),
                               h * Matrix::Identity(2, 2), c, grid, 1e-9);
      CHECK(rep.passed);
      CHECK(rep.max_rel_deviation < 1e-10);
    }
  }
  SUBCASE("H = h I + theta J also works: rotations commute with I Gamma") {
    auto rep = cov_oss_check(model, Matrix::Identity(2, 2),
                             h * Matrix::Identity(2, 2) + 0.4 * j, 2.0, grid,
                             1e-9);
    CHECK(rep.passed);
  }
  SUBCASE("wrong H fails with the predicted deviation") {
    auto rep = cov_oss_check(model, Matrix::Identity(2, 2),
                             (h + 0.1) * Matrix::Identity(2, 2), 2.0, grid,
                             1e-5);
    CHECK_FALSE(rep.passed);
    // Relative to Gamma(cs, ct): deviation |c^{2h'} - c^{2h}| / c^{2h}
    // = 2^{0.2} - 1, exact for the closed-form model.
    const double expected = std::pow(2.0, 0.2) - 1.0;
    CHECK(std::abs(rep.max_rel_deviation - expected) <= 0.01 * expected);
  }
}

TEST_CASE("symmetry checks") {
  auto model = make_fbf_closed_form_model(3.0);
  const auto grid = sample_grid();
  Matrix rot(2, 2);
  const double a = 1.1;
  rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  Matrix refl = Matrix::Identity(2, 2);
  refl(1, 1) = -1.0;

  CHECK(dom_symmetry_check(model, rot, grid, 1e-9).passed);
  CHECK(dom_symmetry_check(model, refl, grid, 1e-9).passed);
  CHECK(ran_symmetry_check(model, rot, grid, 1e-9).passed);
  CHECK(ran_symmetry_check(model, refl, grid, 1e-9).passed);

  Matrix stretch = Matrix::Zero(2, 2);
  stretch.diagonal() << 2.0, 1.0;
  auto bad_dom = dom_symmetry_check(model, stretch, grid, 1e-6);
  CHECK_FALSE(bad_dom.passed);
  CHECK(bad_dom.max_abs_deviation > 1e-3);
  CHECK_FALSE(ran_symmetry_check(model, stretch, grid, 1e-6).passed);
}

TEST_CASE("user table model") {
  std::vector<Vector> pts = {vec2(0.0, 0.0), vec2(1.0, 0.0)};
  Matrix g01(2, 2);
  g01 << 1.0, 0.25, 0.25, 2.0;
  std::vector<std::vector<Matrix>> blocks = {
      {Matrix::Zero(2, 2), g01}, {g01.transpose(), 3.0 * Matrix::Identity(2, 2)}};
  auto model = make_user_table_model(2, pts, blocks);
  CHECK((model.eval(pts[0], pts[1]) - g01).norm() == 0.0);
  CHECK((model.eval(pts[1], pts[0]) - g01.transpose()).norm() == 0.0);
  CHECK_THROWS_AS(model.eval(vec2(0.5, 0.0), pts[0]), ossf::DomainError);
}

TEST_CASE("ofbf model eval matches ofbf_cov and caches") {
  auto model = make_ofbf_model(2.8);
  const Vector s = vec2(0.7, -0.1), t = vec2(-0.2, 0.9);
  const Matrix direct = ofbf_cov(s, t, 2.8);
  CHECK((model.eval(s, t) - direct).norm() < 1e-14);
  CHECK((model.eval(s, t) - direct).norm() < 1e-14);  // cached second hit
}
