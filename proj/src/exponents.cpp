#include "ossfield/exponents.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ossfield/rng.hpp"

namespace ossf {
namespace exponents {

namespace {

constexpr double kPi = std::numbers::pi;

Matrix rotation2(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

Matrix reflection2(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), std::sin(theta), std::sin(theta), -std::cos(theta);
  return r;
}

// Haar-distributed orthogonal matrix via QR of a Gaussian matrix with the
// R-diagonal sign fix.
Matrix haar_orthogonal(Eigen::Index n, rng::CounterStream& stream,
                       bool special) {
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = stream.next_normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  if (special && q.determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

// Complex nullspace dimension and basis of (M - lambda I).
std::pair<Eigen::Index, Eigen::MatrixXcd> kernel_of(const Eigen::MatrixXcd& m,
                                                    double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  const double cut = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return {m.cols() - rank, svd.matrixV().rightCols(m.cols() - rank)};
}

struct EigenClass {
  Complex value;
  int multiplicity;
};

std::vector<EigenClass> clustered_eigenvalues(const Matrix& m, double tol) {
  const auto spec = matlin::spectrum(m);
  std::vector<EigenClass> classes;
  for (const Complex& z : spec.eigen_values) {
    bool merged = false;
    for (EigenClass& c : classes) {
      if (std::abs(z - c.value) <= tol) {
        c.value = (c.value * static_cast<double>(c.multiplicity) + z) /
                  static_cast<double>(c.multiplicity + 1);
        ++c.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) classes.push_back({z, 1});
  }
  return classes;
}

std::vector<double> sorted_real_parts(const Matrix& m) {
  auto s = matlin::spectrum(m);
  return s.eigen_real_parts;
}

// Orthonormal basis of span(basis) as vectors in R^{n^2}.
Matrix span_orthonormal(const std::vector<Matrix>& basis, double tol) {
  if (basis.empty()) return Matrix(0, 0);
  const Eigen::Index n2 = basis[0].size();
  Matrix w(n2, static_cast<Eigen::Index>(basis.size()));
  for (size_t k = 0; k < basis.size(); ++k) {
    w.col(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const Vector>(basis[k].data(), n2);
  }
  Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeThinU);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * svd.singularValues()(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

GroupSpec GroupSpec::orthogonal(Eigen::Index n) {
  if (n < 1) throw ValidationError("orthogonal(n) requires n >= 1");
  return GroupSpec(GroupKind::kOrthogonal, n);
}

GroupSpec GroupSpec::special_orthogonal(Eigen::Index n) {
  if (n < 1) throw ValidationError("special_orthogonal(n) requires n >= 1");
  return GroupSpec(GroupKind::kSpecialOrthogonal, n);
}

GroupSpec GroupSpec::trivial(Eigen::Index n) {
  if (n < 1) throw ValidationError("trivial(n) requires n >= 1");
  return GroupSpec(GroupKind::kTrivial, n);
}

GroupSpec GroupSpec::finite(std::vector<Matrix> elements, double tol) {
  if (elements.empty()) throw ValidationError("finite group: empty element list");
  const Eigen::Index n = elements[0].rows();
  for (const Matrix& g : elements) {
    matlin::validate_square(g, "group element");
    if (g.rows() != n) throw ValidationError("finite group: mixed dimensions");
  }
  for (const Matrix& g : elements) {
    Eigen::FullPivLU<Matrix> lu(g);
    if (!lu.isInvertible()) throw ValidationError("finite group: singular element");
    const Matrix inv = lu.inverse();
    bool found = false;
    for (const Matrix& h : elements) {
      if ((inv - h).norm() <= tol * std::max(1.0, h.norm())) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw ValidationError("finite group: element list not closed under inverse");
    }
  }
  GroupSpec spec(GroupKind::kFinite, n);
  spec.elements_ = std::move(elements);
  return spec;
}

std::vector<Matrix> GroupSpec::sample_elements(int count) const {
  std::vector<Matrix> out;
  switch (kind_) {
    case GroupKind::kTrivial:
      out.push_back(Matrix::Identity(dim_, dim_));
      return out;
    case GroupKind::kFinite:
      return elements_;
    case GroupKind::kOrthogonal:
    case GroupKind::kSpecialOrthogonal:
      break;
  }
  const bool with_reflections = kind_ == GroupKind::kOrthogonal;
  if (dim_ == 2) {
    const int per_class = with_reflections ? std::max(1, count / 2) : count;
    for (int k = 0; k < per_class; ++k) {
      out.push_back(rotation2(2.0 * kPi * k / per_class));
    }
    if (with_reflections) {
      for (int k = 0; k < per_class; ++k) {
        out.push_back(reflection2(2.0 * kPi * k / per_class));
      }
    }
    return out;
  }
  rng::CounterStream stream(2026ULL, 77ULL);
  for (int k = 0; k < count; ++k) {
    out.push_back(haar_orthogonal(
        dim_, stream, kind_ == GroupKind::kSpecialOrthogonal));
  }
  return out;
}

Matrix ExponentFamily::member(const std::vector<double>& coeffs) const {
  if (coeffs.size() != tangent_basis.size()) {
    throw ValidationError("family member: expected " +
                          std::to_string(tangent_basis.size()) +
                          " coefficients, got " + std::to_string(coeffs.size()));
  }
  Matrix m = base;
  for (size_t i = 0; i < coeffs.size(); ++i) m += coeffs[i] * tangent_basis[i];
  return m;
}

std::vector<Matrix> tangent_basis(const GroupSpec& g) {
  switch (g.kind()) {
    case GroupKind::kOrthogonal:
    case GroupKind::kSpecialOrthogonal:
      if (g.dim() == 1) return {};
      return matlin::skew_basis(g.dim());
    case GroupKind::kFinite:
    case GroupKind::kTrivial:
      // A discrete group admits no nontrivial curves through the identity.
      return {};
  }
  return {};
}

ExponentFamily exponent_family(const Matrix& base, const GroupSpec& g, Side side) {
  matlin::validate_square(base, "family base");
  if (base.rows() != g.dim()) {
    throw ValidationError("exponent_family: base and group dimension mismatch");
  }
  const AdmissibilityReport adm = admissibility_check(base);
  if (!adm.admissible) {
    std::ostringstream os;
    os << "exponent_family: inadmissible base:";
    for (const auto& r : adm.reasons) os << ' ' << r << ';';
    throw DomainError(os.str());
  }
  ExponentFamily fam;
  fam.base = base;
  fam.tangent_basis = tangent_basis(g);
  fam.side = side;
  fam.group = g;
  return fam;
}

Matrix haar_commuting_exponent(const Matrix& h, const GroupSpec& g,
                               const HaarConfig& cfg) {
  matlin::validate_square(h, "haar input");
  if (h.rows() != g.dim()) {
    throw ValidationError("haar_commuting_exponent: dimension mismatch");
  }
  switch (g.kind()) {
    case GroupKind::kTrivial:
      return h;
    case GroupKind::kFinite: {
      Matrix acc = Matrix::Zero(h.rows(), h.cols());
      for (const Matrix& a : g.elements()) {
        acc += a * h * a.inverse();
      }
      return acc / static_cast<double>(g.elements().size());
    }
    case GroupKind::kOrthogonal:
    case GroupKind::kSpecialOrthogonal:
      break;
  }
  if (g.dim() == 1) return h;
  if (g.dim() == 2) {
    // Periodic trapezoid over the rotation angle is exact here: the
    // integrand is a trigonometric polynomial of degree 2.
    Matrix acc = Matrix::Zero(2, 2);
    const int n = cfg.rotation_nodes;
    for (int k = 0; k < n; ++k) {
      const Matrix r = rotation2(2.0 * kPi * k / n);
      acc += r * h * r.transpose();
    }
    acc /= static_cast<double>(n);
    if (g.kind() == GroupKind::kOrthogonal) {
      Matrix refl = Matrix::Zero(2, 2);
      for (int k = 0; k < n; ++k) {
        const Matrix s = reflection2(2.0 * kPi * k / n);
        refl += s * h * s.transpose();
      }
      refl /= static_cast<double>(n);
      acc = 0.5 * (acc + refl);
    }
    return acc;
  }
  // n >= 3: Monte Carlo over Haar samples, error ~ 1/sqrt(N).
  rng::CounterStream stream(cfg.seed, 101ULL);
  Matrix acc = Matrix::Zero(h.rows(), h.cols());
  for (int k = 0; k < cfg.samples; ++k) {
    const Matrix a = haar_orthogonal(
        g.dim(), stream, g.kind() == GroupKind::kSpecialOrthogonal);
    acc += a * h * a.transpose();
  }
  return acc / static_cast<double>(cfg.samples);
}

FamilyReport family_invariants_check(const ExponentFamily& fam, int samples,
                                     double tol) {
  matlin::validate_square(fam.base, "family base");
  FamilyReport rep;
  rep.samples = samples;
  const std::vector<double> base_spec = sorted_real_parts(fam.base);
  const auto base_sn = matlin::sn_decompose(fam.base);
  const std::vector<Matrix> group_samples = fam.group.sample_elements(16);

  rng::CounterStream stream(2026ULL, 5ULL);
  for (int s = 0; s < samples; ++s) {
    std::vector<double> coeffs(fam.tangent_basis.size());
    for (double& c : coeffs) c = 4.0 * stream.next_uniform() - 2.0;
    const Matrix m = fam.member(coeffs);

    const std::vector<double> spec = sorted_real_parts(m);
    for (size_t i = 0; i < spec.size(); ++i) {
      rep.max_spectrum_deviation = std::max(
          rep.max_spectrum_deviation, std::abs(spec[i] - base_spec[i]));
    }
    const auto sn = matlin::sn_decompose(m);
    rep.max_nilpotent_deviation = std::max(
        rep.max_nilpotent_deviation, (sn.nilpotent - base_sn.nilpotent).norm());
    for (const Matrix& a : group_samples) {
      rep.max_nilpotent_commutator =
          std::max(rep.max_nilpotent_commutator,
                   matlin::commutator(sn.nilpotent, a).norm());
    }
  }
  rep.passed = rep.max_spectrum_deviation <= tol &&
               rep.max_nilpotent_deviation <= tol &&
               rep.max_nilpotent_commutator <= tol;
  return rep;
}

bool set_difference_check(const ExponentFamily& fam1, const ExponentFamily& fam2,
                          double tol) {
  if (fam1.base.rows() != fam2.base.rows() || fam1.side != fam2.side) {
    throw ValidationError("set_difference_check: incompatible families");
  }
  const bool e1 = fam1.tangent_basis.empty();
  const bool e2 = fam2.tangent_basis.empty();
  if (e1 || e2) return e1 == e2;
  const Matrix q1 = span_orthonormal(fam1.tangent_basis, 1e-12);
  const Matrix q2 = span_orthonormal(fam2.tangent_basis, 1e-12);
  if (q1.cols() != q2.cols()) return false;
  const double r12 = (q1 - q2 * (q2.transpose() * q1)).norm();
  const double r21 = (q2 - q1 * (q1.transpose() * q2)).norm();
  return r12 <= tol && r21 <= tol;
}

AdmissibilityReport admissibility_check(const Matrix& h, double tol) {
  matlin::validate_square(h, "admissibility input");
  AdmissibilityReport rep;
  const double cluster_tol = std::max(tol, 1e-9 * std::max(1.0, h.norm()));
  const auto classes = clustered_eigenvalues(h, cluster_tol);
  for (const EigenClass& c : classes) {
    if (c.value.real() < -tol) {
      std::ostringstream os;
      os << "eigenvalue " << c.value << " has negative real part";
      rep.reasons.push_back(os.str());
      continue;
    }
    if (std::abs(c.value.real()) <= tol) {
      // Simple root of the minimal polynomial <=> full geometric
      // multiplicity at this eigenvalue.
      const Eigen::MatrixXcd shifted =
          h.cast<Complex>() -
          Complex(0.0, c.value.imag()) *
              Eigen::MatrixXcd::Identity(h.rows(), h.cols());
      const auto [null_dim, basis] = kernel_of(shifted, 1e-9);
      if (null_dim < c.multiplicity) {
        std::ostringstream os;
        os << "zero-real-part eigenvalue " << c.value
           << " is defective (geometric multiplicity " << null_dim
           << " < algebraic " << c.multiplicity << ")";
        rep.reasons.push_back(os.str());
      }
    }
  }
  rep.admissible = rep.reasons.empty();
  return rep;
}

bool opposite_sign_check(const Matrix& e, const Matrix& h, double tol) {
  const auto se = matlin::spectrum(e);
  const auto sh = matlin::spectrum(h);
  for (double re : se.eigen_real_parts) {
    for (double rh : sh.eigen_real_parts) {
      if ((re > tol && rh < -tol) || (re < -tol && rh > tol)) return false;
    }
  }
  return true;
}

Matrix invariant_gaussian(const Matrix& h1) {
  matlin::validate_square(h1, "invariant_gaussian input");
  const Eigen::Index n = h1.rows();
  const double scale = std::max(1.0, h1.norm());
  const double tol = 1e-8 * scale;

  const auto classes = clustered_eigenvalues(h1, tol);
  for (const EigenClass& c : classes) {
    if (std::abs(c.value.real()) > tol) {
      std::ostringstream os;
      os << "invariant_gaussian: eigenvalue " << c.value
         << " has nonzero real part";
      throw DomainError(os.str());
    }
  }

  // Real block-diagonalizing basis: kernel vectors of H (theta = 0) and
  // real/imaginary parts of eigenvectors for each conjugate pair.
  Matrix p(n, n);
  Eigen::Index col = 0;
  for (const EigenClass& c : classes) {
    if (c.value.imag() < -tol) continue;  // conjugate partner handles it
    if (std::abs(c.value.imag()) <= tol) {
      Eigen::JacobiSVD<Matrix> svd(h1, Eigen::ComputeFullV);
      Eigen::Index rank = 0;
      for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++rank;
      const Eigen::Index null_dim = n - rank;
      if (null_dim < c.multiplicity) {
        throw DomainError("invariant_gaussian: zero eigenvalue is defective");
      }
      p.middleCols(col, c.multiplicity) =
          svd.matrixV().rightCols(null_dim).leftCols(c.multiplicity);
      col += c.multiplicity;
    } else {
      const Eigen::MatrixXcd shifted =
          h1.cast<Complex>() -
          Complex(0.0, c.value.imag()) * Eigen::MatrixXcd::Identity(n, n);
      const auto [null_dim, basis] = kernel_of(shifted, 1e-9);
      if (null_dim < c.multiplicity) {
        throw DomainError(
            "invariant_gaussian: complex eigenvalue is defective, H1 is not "
            "semisimple");
      }
      for (Eigen::Index k = 0; k < c.multiplicity; ++k) {
        // H (a + ib) = i theta (a + ib) gives Hb = theta a, Ha = -theta b:
        // the column pair (b, a) carries the canonical theta J block.
        p.col(col++) = basis.col(k).imag();
        p.col(col++) = basis.col(k).real();
      }
    }
  }
  if (col != n) {
    throw NumericError("invariant_gaussian: eigenbasis assembly failed");
  }
  Eigen::FullPivLU<Matrix> lu(p);
  if (!lu.isInvertible()) {
    throw NumericError("invariant_gaussian: change of basis is singular");
  }
  return p * p.transpose();
}

matlin::SpectralSplit decompose_field_exponent(const Matrix& h, double tol) {
  const AdmissibilityReport adm = admissibility_check(h, tol);
  if (!adm.admissible) {
    std::ostringstream os;
    os << "decompose_field_exponent: inadmissible exponent:";
    for (const auto& r : adm.reasons) os << ' ' << r << ';';
    throw DomainError(os.str());
  }
  auto split = matlin::spectral_split(h, std::max(tol, 1e-7));
  if (split.dim_zero > 0) {
    const auto sn = matlin::sn_decompose(split.block_zero);
    if (sn.nilpotent.norm() > 1e-7 * std::max(1.0, h.norm())) {
      throw NumericError(
          "decompose_field_exponent: zero-real-part block is not semisimple");
    }
  }
  return split;
}

}  // namespace exponents
}  // namespace ossf
