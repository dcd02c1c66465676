#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ossfield/exponents.hpp"
#include "ossfield/matlin.hpp"
#include "ossfield/rng.hpp"

using ossf::Matrix;
using namespace ossf::exponents;

namespace {

Matrix rot_gen() {
  Matrix j(2, 2);
  j << 0.0, -1.0, 1.0, 0.0;
  return j;
}

Matrix random_matrix(ossf::rng::CounterStream& stream, Eigen::Index n,
                     double scale = 1.0) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = scale * (2.0 * stream.next_uniform() - 1.0);
  return m;
}

}  // namespace

TEST_CASE("group specs and sampling") {
  auto o2 = GroupSpec::orthogonal(2);
  auto samples = o2.sample_elements(16);
  CHECK(samples.size() == 16);
  int rotations = 0, reflections = 0;
  for (const Matrix& a : samples) {
    CHECK((a * a.transpose() - Matrix::Identity(2, 2)).norm() < 1e-12);
    (a.determinant() > 0.0 ? rotations : reflections)++;
  }
  CHECK(rotations > 0);
  CHECK(reflections > 0);

  for (const Matrix& a : GroupSpec::special_orthogonal(2).sample_elements(8)) {
    CHECK(a.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }

  for (const Matrix& a : GroupSpec::orthogonal(3).sample_elements(10)) {
    CHECK((a * a.transpose() - Matrix::Identity(3, 3)).norm() < 1e-12);
  }

  auto tr = GroupSpec::trivial(3);
  auto ts = tr.sample_elements(5);
  for (const Matrix& a : ts) CHECK((a - Matrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("finite group validation") {
  Matrix flip = Matrix::Identity(2, 2);
  flip(1, 1) = -1.0;
  auto g = GroupSpec::finite({Matrix::Identity(2, 2), flip});
  CHECK(g.kind() == GroupKind::kFinite);
  CHECK(g.sample_elements(10).size() == 2);

  // A lone non-involutive rotation is not inverse-closed.
  CHECK_THROWS_AS(
      (void)GroupSpec::finite({ossf::matlin::expm(1.0 * rot_gen())}),
      ossf::ValidationError);
  CHECK_THROWS_AS((void)GroupSpec::finite({}), ossf::ValidationError);
}

TEST_CASE("tangent_basis") {
  auto b_o2 = tangent_basis(GroupSpec::orthogonal(2));
  REQUIRE(b_o2.size() == 1);
  CHECK((b_o2[0] + b_o2[0].transpose()).norm() == 0.0);

  CHECK(tangent_basis(GroupSpec::special_orthogonal(2)).size() == 1);
  CHECK(tangent_basis(GroupSpec::orthogonal(3)).size() == 3);
  CHECK(tangent_basis(GroupSpec::trivial(2)).empty());

  Matrix flip = Matrix::Identity(2, 2);
  flip(1, 1) = -1.0;
  CHECK(tangent_basis(GroupSpec::finite({Matrix::Identity(2, 2), flip})).empty());
}

TEST_CASE("exponent_family membership") {
  const double h = 0.7;
  auto fam = exponent_family(h * Matrix::Identity(2, 2),
                             GroupSpec::orthogonal(2), Side::kRange);
  REQUIRE(fam.tangent_basis.size() == 1);
  const Matrix m = fam.member({0.3});
  // h I + 0.3 * (+-J): real parts stay at h either way.
  auto s = ossf::matlin::spectrum(m);
  CHECK(s.eigen_real_parts[0] == doctest::Approx(h).epsilon(1e-12));
  CHECK(std::abs(s.eigen_values[0].imag()) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS((void)fam.member({0.3, 0.1}), ossf::ValidationError);

  // Inadmissible base is rejected.
  Matrix bad = Matrix::Zero(2, 2);
  bad.diagonal() << -1.0, 1.0;
  CHECK_THROWS_AS(
      (void)exponent_family(bad, GroupSpec::orthogonal(2), Side::kRange),
      ossf::DomainError);
}

TEST_CASE("haar_commuting_exponent for n = 2 is the closed form") {
  // Averaging A H A^{-1} over O(2) projects onto span{I}: (tr H / 2) I.
  // Over SO(2) it projects onto span{I, J}.
  ossf::rng::CounterStream stream(99, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix h = random_matrix(stream, 2, 2.0);
    const Matrix avg_o = haar_commuting_exponent(h, GroupSpec::orthogonal(2));
    CHECK((avg_o - 0.5 * h.trace() * Matrix::Identity(2, 2)).norm() < 1e-9);

    const Matrix avg_so =
        haar_commuting_exponent(h, GroupSpec::special_orthogonal(2));
    const double beta = 0.5 * (h(1, 0) - h(0, 1));
    const Matrix expected =
        0.5 * h.trace() * Matrix::Identity(2, 2) + beta * rot_gen();
    CHECK((avg_so - expected).norm() < 1e-9);

    // Commutes with every sampled group element, trace is preserved.
    for (const Matrix& a : GroupSpec::orthogonal(2).sample_elements(16)) {
      CHECK(ossf::matlin::commutator(avg_o, a).norm() < 1e-9);
    }
    CHECK(avg_o.trace() == doctest::Approx(h.trace()).epsilon(1e-12));
  }
}

TEST_CASE("haar_commuting_exponent for n = 3 commutes within Monte Carlo error") {
  ossf::rng::CounterStream stream(17, 8);
  const Matrix h = random_matrix(stream, 3, 1.0);
  HaarConfig cfg;
  cfg.samples = 20000;
  const Matrix avg = haar_commuting_exponent(h, GroupSpec::orthogonal(3), cfg);
  // Haar averaging over O(3) acting by conjugation projects onto span{I}.
  CHECK((avg - (h.trace() / 3.0) * Matrix::Identity(3, 3)).norm() < 0.05);
  CHECK(avg.trace() == doctest::Approx(h.trace()).epsilon(1e-9));
}

TEST_CASE("family_invariants_check") {
  const double h = 0.6;
  auto fam = exponent_family(h * Matrix::Identity(2, 2),
                             GroupSpec::orthogonal(2), Side::kRange);
  auto rep = family_invariants_check(fam, 50, 1e-8);
  CHECK(rep.passed);
  CHECK(rep.samples == 50);
  CHECK(rep.max_spectrum_deviation <= 1e-8);

  // A deliberately broken family: a non-skew direction changes the spectrum.
  ExponentFamily broken = fam;
  Matrix stretch = Matrix::Zero(2, 2);
  stretch.diagonal() << 1.0, -1.0;
  broken.tangent_basis = {stretch};
  CHECK_FALSE(family_invariants_check(broken, 50, 1e-8).passed);
}

TEST_CASE("set_difference_check") {
  auto f1 = exponent_family(0.5 * Matrix::Identity(2, 2),
                            GroupSpec::orthogonal(2), Side::kRange);
  auto f2 = exponent_family(Matrix::Identity(2, 2),
                            GroupSpec::special_orthogonal(2), Side::kRange);
  // O(2) and SO(2) share the same tangent space so(2).
  CHECK(set_difference_check(f1, f2, 1e-10));
  // Families on different sides are not comparable.
  auto f_dom = exponent_family(Matrix::Identity(2, 2),
                               GroupSpec::special_orthogonal(2), Side::kDomain);
  CHECK_THROWS_AS((void)set_difference_check(f1, f_dom, 1e-10),
                  ossf::ValidationError);

  auto f3 = exponent_family(0.5 * Matrix::Identity(2, 2),
                            GroupSpec::trivial(2), Side::kRange);
  CHECK_FALSE(set_difference_check(f1, f3, 1e-10));
}

TEST_CASE("admissibility_check") {
  CHECK(admissibility_check(Matrix::Identity(2, 2)).admissible);
  CHECK(admissibility_check(Matrix::Zero(2, 2)).admissible);
  CHECK(admissibility_check(rot_gen()).admissible);

  Matrix neg = Matrix::Zero(2, 2);
  neg.diagonal() << 1.0, -0.2;
  auto rep_neg = admissibility_check(neg);
  CHECK_FALSE(rep_neg.admissible);
  CHECK_FALSE(rep_neg.reasons.empty());

  // Nilpotent block at eigenvalue 0: zero real part but not semisimple.
  Matrix nil = Matrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  CHECK_FALSE(admissibility_check(nil).admissible);

  // Jordan block at a positive eigenvalue is fine.
  Matrix jb(2, 2);
  jb << 1.0, 1.0, 0.0, 1.0;
  CHECK(admissibility_check(jb).admissible);
}

TEST_CASE("opposite_sign_check") {
  Matrix pos = Matrix::Identity(2, 2);
  Matrix mixed = Matrix::Zero(2, 2);
  mixed.diagonal() << 1.0, -1.0;
  CHECK(opposite_sign_check(pos, 0.5 * pos));
  CHECK(opposite_sign_check(pos, Matrix::Zero(2, 2)));
  CHECK_FALSE(opposite_sign_check(pos, -pos));
  CHECK_FALSE(opposite_sign_check(mixed, pos));
}

TEST_CASE("invariant_gaussian") {
  SUBCASE("rotation generator gives an isotropic covariance") {
    const Matrix sigma = invariant_gaussian(rot_gen());
    CHECK(sigma.rows() == 2);
    CHECK((sigma - sigma.transpose()).norm() < 1e-14);
    auto es = Eigen::SelfAdjointEigenSolver<Matrix>(sigma);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    for (double r : {0.01, 0.5, 3.0, 100.0}) {
      const Matrix rh = ossf::matlin::mat_power(rot_gen(), r);
      CHECK((rh * sigma * rh.transpose() - sigma).norm() < 1e-10);
    }
  }
  SUBCASE("conjugated block matrices") {
    ossf::rng::CounterStream stream(23, 6);
    for (int trial = 0; trial < 20; ++trial) {
      Matrix canon = Matrix::Zero(3, 3);
      canon.topLeftCorner(2, 2) = 0.9 * rot_gen();
      Matrix q = random_matrix(stream, 3, 1.0);
      while (std::abs(q.determinant()) < 0.2) q = random_matrix(stream, 3, 1.0);
      const Matrix h1 = q * canon * q.inverse();
      const Matrix sigma = invariant_gaussian(h1);
      auto es = Eigen::SelfAdjointEigenSolver<Matrix>(sigma);
      CHECK(es.eigenvalues().minCoeff() > 1e-12);
      for (double r : {0.01, 0.7, 13.0, 100.0}) {
        const Matrix rh = ossf::matlin::mat_power(h1, r);
        CHECK((rh * sigma * rh.transpose() - sigma).norm() <
              1e-8 * std::max(1.0, sigma.norm()));
      }
    }
  }
  SUBCASE("nonzero real parts are rejected") {
    CHECK_THROWS_AS((void)invariant_gaussian(Matrix::Identity(2, 2)),
                    ossf::DomainError);
    Matrix nil = Matrix::Zero(2, 2);
    nil(0, 1) = 1.0;
    CHECK_THROWS_AS((void)invariant_gaussian(nil), ossf::DomainError);
  }
}

TEST_CASE("decompose_field_exponent") {
  Matrix h = Matrix::Zero(3, 3);
  h.topLeftCorner(2, 2) = 2.0 * rot_gen();
  h(2, 2) = 0.8;
  auto split = decompose_field_exponent(h);
  CHECK(split.dim_zero == 2);
  CHECK(split.dim_positive == 1);

  // Inadmissible: nilpotent zero block.
  Matrix nil = Matrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  CHECK_THROWS_AS((void)decompose_field_exponent(nil), ossf::DomainError);
}
