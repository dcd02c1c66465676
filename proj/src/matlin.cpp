#include "ossfield/matlin.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace ossf {
namespace matlin {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

std::vector<Complex> eigenvalues_of(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NumericError("eigen-solver failed to converge (dim=" +
                       std::to_string(m.rows()) + ")");
  }
  std::vector<Complex> ev(es.eigenvalues().data(),
                          es.eigenvalues().data() + m.rows());
  return ev;
}

// Union-find clustering of eigenvalues at absolute distance tol.
struct Cluster {
  Complex center;      // multiplicity-weighted mean
  int multiplicity;
};

std::vector<Cluster> cluster_eigenvalues(const std::vector<Complex>& ev,
                                         double tol) {
  const int n = static_cast<int>(ev.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(ev[i] - ev[j]) <= tol) parent[find(i)] = find(j);

  std::vector<Cluster> clusters;
  std::vector<int> root_of(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (root_of[r] < 0) {
      root_of[r] = static_cast<int>(clusters.size());
      clusters.push_back({Complex(0, 0), 0});
    }
    Cluster& c = clusters[root_of[r]];
    c.center += ev[i];
    ++c.multiplicity;
  }
  for (Cluster& c : clusters) c.center /= static_cast<double>(c.multiplicity);

  // Transitive closure can leave two distinct clusters almost touching; the
  // multiplicity assignment is then unreliable at this tol.
  for (size_t i = 0; i < clusters.size(); ++i)
    for (size_t j = i + 1; j < clusters.size(); ++j)
      if (std::abs(clusters[i].center - clusters[j].center) < 3.0 * tol) {
        std::ostringstream os;
        os << "eigenvalue clusters at " << clusters[i].center << " and "
           << clusters[j].center << " cannot be resolved at tol " << tol;
        throw ConditioningError(os.str());
      }
  return clusters;
}

// Hermite interpolation data: p(mu_j) = v_j, p^(k)(mu_j) = 0 for
// 1 <= k < m_j.  Solves the confluent Vandermonde system for the
// coefficients of p (degree < sum m_j).
ComplexVector hermite_coefficients(const std::vector<Cluster>& clusters,
                                   const std::vector<Complex>& values) {
  int n = 0;
  for (const Cluster& c : clusters) n += c.multiplicity;
  ComplexMatrix vand = ComplexMatrix::Zero(n, n);
  ComplexVector rhs = ComplexVector::Zero(n);
  int row = 0;
  for (size_t j = 0; j < clusters.size(); ++j) {
    const Complex mu = clusters[j].center;
    for (int k = 0; k < clusters[j].multiplicity; ++k, ++row) {
      // d^k/dx^k x^p at mu = p!/(p-k)! mu^{p-k}
      for (int p = k; p < n; ++p) {
        double fact = 1.0;
        for (int q = 0; q < k; ++q) fact *= static_cast<double>(p - q);
        vand(row, p) = fact * std::pow(mu, p - k);
      }
      rhs(row) = (k == 0) ? values[j] : Complex(0, 0);
    }
  }
  return vand.fullPivLu().solve(rhs);
}

ComplexMatrix horner(const ComplexVector& coeffs, const Matrix& m) {
  const Eigen::Index n = m.rows();
  ComplexMatrix mc = m.cast<Complex>();
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (Eigen::Index p = coeffs.size() - 1; p >= 0; --p) {
    acc = acc * mc;
    acc.diagonal().array() += coeffs(p);
  }
  return acc;
}

// Swaps diagonal entries k, k+1 of the upper-triangular T in a complex
// Schur form M = U T U^*, keeping the factorization valid.
void schur_swap(ComplexMatrix& t, ComplexMatrix& u, Eigen::Index k) {
  const Complex t11 = t(k, k), t12 = t(k, k + 1), t22 = t(k + 1, k + 1);
  // Eigenvector of [[t11,t12],[0,t22]] for t22 is (t12, t22 - t11).
  Eigen::JacobiRotation<Complex> rot;
  rot.makeGivens(t12, t22 - t11);
  t.applyOnTheLeft(k, k + 1, rot.adjoint());
  t.applyOnTheRight(k, k + 1, rot);
  u.applyOnTheRight(k, k + 1, rot);
  t(k + 1, k) = Complex(0, 0);  // exact by construction, drop roundoff
}

// Reorders the Schur form so that entries flagged by `front` come first.
// Returns the number of flagged entries.
Eigen::Index schur_reorder(ComplexMatrix& t, ComplexMatrix& u,
                           const std::function<bool(const Complex&)>& front) {
  const Eigen::Index n = t.rows();
  Eigen::Index target = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!front(t(i, i))) continue;
    for (Eigen::Index k = i; k > target; --k) schur_swap(t, u, k - 1);
    ++target;
  }
  return target;
}

// Real orthonormal basis of the real invariant subspace spanned (over C)
// by the given complex columns.  The eigenvalue class must be closed under
// conjugation, so the real span of {Re u, Im u} has the same dimension.
Matrix real_basis(const ComplexMatrix& cols, Eigen::Index rank) {
  Matrix w(cols.rows(), 2 * cols.cols());
  w << cols.real(), cols.imag();
  Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeThinU);
  if (rank > 0 && svd.singularValues()(rank - 1) <
                      1e-10 * std::max(1.0, svd.singularValues()(0))) {
    throw NumericError("invariant subspace is numerically rank-deficient");
  }
  return svd.matrixU().leftCols(rank);
}

}  // namespace

void validate_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ValidationError(std::string(what) + " must be square and non-empty (got " +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ")");
  }
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + " has non-finite entries");
  }
}

Matrix expm(const Matrix& m) {
  validate_square(m);
  return m.exp();
}

Matrix mat_power(const Matrix& m, double c) {
  validate_square(m);
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError("mat_power requires c > 0, got " + std::to_string(c));
  }
  return expm(m * std::log(c));
}

SpectrumSummary spectrum(const Matrix& m) {
  validate_square(m);
  SpectrumSummary s;
  s.eigen_values = eigenvalues_of(m);
  std::sort(s.eigen_values.begin(), s.eigen_values.end(),
            [](const Complex& a, const Complex& b) {
              return a.real() != b.real() ? a.real() < b.real()
                                          : a.imag() < b.imag();
            });
  s.eigen_real_parts.reserve(s.eigen_values.size());
  for (const Complex& z : s.eigen_values) s.eigen_real_parts.push_back(z.real());
  s.min_real_part = s.eigen_real_parts.front();
  s.all_positive = s.min_real_part > 0.0;
  return s;
}

SNDecomposition sn_decompose(const Matrix& m, double tol) {
  validate_square(m);
  if (tol <= 0.0) tol = std::max(1e-7 * m.norm(), 1e-12);
  const std::vector<Complex> ev = eigenvalues_of(m);
  const std::vector<Cluster> clusters = cluster_eigenvalues(ev, tol);

  // Chevalley: S = p(M) with p == mu_j mod (x - mu_j)^{m_j}.
  std::vector<Complex> targets;
  targets.reserve(clusters.size());
  for (const Cluster& c : clusters) targets.push_back(c.center);
  const ComplexVector coeffs = hermite_coefficients(clusters, targets);

  SNDecomposition out;
  // Conjugate-symmetric clusters give real coefficients up to roundoff.
  out.semisimple = horner(coeffs, m).real();
  out.nilpotent = m - out.semisimple;
  return out;
}

SpectralSplit spectral_split(const Matrix& m, double zero_band) {
  validate_square(m);
  if (zero_band <= 0.0) {
    throw ValidationError("zero_band must be positive");
  }
  const std::vector<Complex> ev = eigenvalues_of(m);
  const double edge_tol = 1e-9 * std::max(1.0, m.norm());
  for (const Complex& z : ev) {
    if (z.real() <= -zero_band) {
      std::ostringstream os;
      os << "inadmissible exponent: eigenvalue " << z
         << " has real part <= -" << zero_band;
      throw DomainError(os.str());
    }
    if (std::abs(std::abs(z.real()) - zero_band) <= edge_tol) {
      std::ostringstream os;
      os << "eigenvalue " << z << " sits on the zero_band edge " << zero_band;
      throw ConditioningError(os.str());
    }
  }
  auto in_zero_class = [zero_band](const Complex& z) {
    return std::abs(z.real()) < zero_band;
  };

  Eigen::ComplexSchur<ComplexMatrix> schur(m.cast<Complex>());
  if (schur.info() != Eigen::Success) {
    throw NumericError("complex Schur decomposition failed");
  }

  SpectralSplit split;
  const Eigen::Index n = m.rows();
  {
    ComplexMatrix t = schur.matrixT(), u = schur.matrixU();
    split.dim_zero = schur_reorder(t, u, in_zero_class);
    split.dim_positive = n - split.dim_zero;
  }

  Matrix p(n, n);
  if (split.dim_zero > 0) {
    ComplexMatrix t = schur.matrixT(), u = schur.matrixU();
    schur_reorder(t, u, in_zero_class);
    p.leftCols(split.dim_zero) =
        real_basis(u.leftCols(split.dim_zero), split.dim_zero);
  }
  if (split.dim_positive > 0) {
    ComplexMatrix t = schur.matrixT(), u = schur.matrixU();
    schur_reorder(t, u, [&](const Complex& z) { return !in_zero_class(z); });
    p.rightCols(split.dim_positive) =
        real_basis(u.leftCols(split.dim_positive), split.dim_positive);
  }

  Eigen::FullPivLU<Matrix> lu(p);
  if (!lu.isInvertible()) {
    throw NumericError("spectral split produced a singular change of basis");
  }
  const Matrix a = lu.solve(m * p);  // P^{-1} M P, block upper by invariance
  split.conjugacy = p;
  split.block_zero = a.topLeftCorner(split.dim_zero, split.dim_zero);
  split.block_positive =
      a.bottomRightCorner(split.dim_positive, split.dim_positive);
  return split;
}

std::vector<Matrix> skew_basis(Eigen::Index n) {
  if (n < 1) throw ValidationError("skew_basis requires n >= 1");
  std::vector<Matrix> basis;
  basis.reserve(static_cast<size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Matrix b = Matrix::Zero(n, n);
      b(i, j) = -1.0;
      b(j, i) = 1.0;
      basis.push_back(std::move(b));
    }
  }
  return basis;
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  validate_square(a, "commutator lhs");
  validate_square(b, "commutator rhs");
  if (a.rows() != b.rows()) {
    throw ValidationError("commutator: dimension mismatch " +
                          std::to_string(a.rows()) + " vs " +
                          std::to_string(b.rows()));
  }
  return a * b - b * a;
}

}  // namespace matlin
}  // namespace ossf
