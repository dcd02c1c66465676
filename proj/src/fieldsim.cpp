#include "ossfield/fieldsim.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

#include "ossfield/rng.hpp"

namespace ossf {
namespace fieldsim {

void Grid::validate() const {
  if (points.empty()) throw ValidationError("grid: no points");
  const Eigen::Index m = points.front().size();
  for (const Vector& p : points) {
    if (p.size() != m) throw ValidationError("grid: mixed point dimensions");
    if (!p.allFinite()) throw ValidationError("grid: non-finite point");
  }
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      if (points[i] == points[j]) {
        throw ValidationError("grid: duplicate point at indices " +
                              std::to_string(i) + ", " + std::to_string(j));
      }
    }
  }
}

Matrix assemble_cov_matrix(const covariance::CovarianceModel& model,
                           const Grid& grid) {
  grid.validate();
  if (grid.domain_dim() != model.domain_dim) {
    throw ValidationError("assemble_cov_matrix: grid/model dimension mismatch");
  }
  const Eigen::Index p = static_cast<Eigen::Index>(grid.points.size());
  const Eigen::Index n = model.range_dim;
  Matrix cov(p * n, p * n);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i; j < p; ++j) {
      const Matrix block = model.eval(grid.points[i], grid.points[j]);
      cov.block(i * n, j * n, n, n) = block;
      if (j > i) cov.block(j * n, i * n, n, n) = block.transpose();
    }
  }
  cov = 0.5 * (cov + cov.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(cov, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  const double budget = 1e-8 * std::max(cov.trace(), 1.0);
  if (min_eig < -budget) {
    throw DomainError(
        "assembled covariance is indefinite beyond the jitter budget "
        "(min eigenvalue " +
        std::to_string(min_eig) + "); the model is not a valid covariance");
  }
  return cov;
}

Matrix robust_cholesky(const Matrix& cov) {
  matlin::validate_square(cov, "covariance");
  if ((cov - cov.transpose()).norm() > 1e-8 * std::max(1.0, cov.norm())) {
    throw ValidationError("robust_cholesky: matrix is not symmetric");
  }
  const Eigen::Index p = cov.rows();
  const double unit = std::max(cov.trace(), 0.0) / static_cast<double>(p);
  // Jitter ladder 0, 1e-12, ..., 1e-8 times trace/p.
  for (double eps : {0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8}) {
    Matrix attempt = cov;
    attempt.diagonal().array() += eps * std::max(unit, 1e-300);
    Eigen::LLT<Matrix> llt(attempt);
    if (llt.info() == Eigen::Success) {
      return llt.matrixL();
    }
  }
  throw NumericError(
      "robust_cholesky: factorization failed after escalating jitter to 1e-8 "
      "* trace/p");
}

Matrix sample_gaussian(const Matrix& cov, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ValidationError("sample_gaussian: n_samples >= 1");
  const Matrix chol = robust_cholesky(cov);
  const Eigen::Index d = cov.rows();
  Matrix out(n_samples, d);
  for (int i = 0; i < n_samples; ++i) {
    rng::CounterStream stream(seed, static_cast<std::uint64_t>(i));
    Vector z(d);
    for (Eigen::Index k = 0; k < d; ++k) z(k) = stream.next_normal();
    out.row(i) = (chol * z).transpose();
  }
  return out;
}

GridSample sample_field(const covariance::CovarianceModel& model,
                        const Grid& grid, int n_samples, std::uint64_t seed) {
  GridSample s;
  s.grid = grid;
  s.range_dim = model.range_dim;
  s.seed = seed;
  s.values = sample_gaussian(assemble_cov_matrix(model, grid), n_samples, seed);
  return s;
}

Matrix empirical_cov(const Matrix& samples) {
  if (samples.rows() < 2) {
    throw ValidationError("empirical_cov needs at least 2 samples");
  }
  const double n = static_cast<double>(samples.rows());
  const Eigen::RowVectorXd mean = samples.colwise().mean();
  const Matrix centered = samples.rowwise() - mean;
  return centered.transpose() * centered / (n - 1.0);
}

OssTestReport empirical_oss_test(const covariance::CovarianceModel& model,
                                 const Matrix& E, const Matrix& H, double c,
                                 const Grid& grid, int n_samples,
                                 std::uint64_t seed, double k_sigma) {
  grid.validate();
  matlin::validate_square(E, "domain exponent E");
  matlin::validate_square(H, "range exponent H");
  if (!(c > 0.0)) throw DomainError("empirical_oss_test requires c > 0");

  const Matrix ce = matlin::mat_power(E, c);
  const Matrix ch_inv = matlin::mat_power(H, 1.0 / c);  // c^{-H}

  Grid scaled;
  scaled.points.reserve(grid.points.size());
  for (const Vector& t : grid.points) scaled.points.push_back(ce * t);

  const Matrix ref = sample_gaussian(assemble_cov_matrix(model, grid),
                                     n_samples, seed);
  Matrix moved = sample_gaussian(assemble_cov_matrix(model, scaled), n_samples,
                                 rng::mix64(seed + 1));

  // Apply c^{-H} blockwise to each realization of X(c^E .).
  const Eigen::Index n = model.range_dim;
  const Eigen::Index p = static_cast<Eigen::Index>(grid.points.size());
  for (int i = 0; i < moved.rows(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      moved.row(i).segment(j * n, n) =
          (ch_inv * moved.row(i).segment(j * n, n).transpose()).transpose();
    }
  }

  const Matrix cov_ref = empirical_cov(ref);
  const Matrix cov_moved = empirical_cov(moved);

  OssTestReport rep;
  rep.scale = cov_ref.cwiseAbs().maxCoeff();
  rep.max_abs_deviation = (cov_moved - cov_ref).cwiseAbs().maxCoeff();
  // Standard error of the difference of two independent covariance
  // estimates is at most 2 * scale / sqrt(N).
  rep.band = k_sigma * 2.0 * rep.scale / std::sqrt(static_cast<double>(n_samples));
  rep.passed = rep.max_abs_deviation <= rep.band;
  return rep;
}

}  // namespace fieldsim
}  // namespace ossf
