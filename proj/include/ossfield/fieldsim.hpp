#pragma once

#include <cstdint>
#include <vector>

#include "ossfield/covariance.hpp"
#include "ossfield/matlin.hpp"

namespace ossf {
namespace fieldsim {

struct Grid {
  std::vector<Vector> points;  // pairwise distinct

  Eigen::Index domain_dim() const {
    return points.empty() ? 0 : points.front().size();
  }
  void validate() const;
};

// Zero-mean Gaussian samples over a grid; row = one field realization,
// columns ordered point-major, range component fastest.
struct GridSample {
  Grid grid;
  Eigen::Index range_dim = 0;
  Matrix values;  // samples x (|points| * range_dim)
  std::uint64_t seed = 0;
};

struct OssTestReport {
  double max_abs_deviation = 0.0;
  double band = 0.0;   // k standard errors at the empirical scale
  double scale = 0.0;  // largest reference covariance entry magnitude
  bool passed = false;
};

// Block matrix [Gamma(t_i, t_j)], symmetric (p n) x (p n).
Matrix assemble_cov_matrix(const covariance::CovarianceModel& model,
                           const Grid& grid);

// Cholesky factor with escalating diagonal jitter eps * trace/p * I,
// eps in [1e-12, 1e-8]; throws NumericError beyond the jitter budget.
Matrix robust_cholesky(const Matrix& cov);

// n_samples i.i.d. N(0, cov) rows; sample i is a pure function of
// (seed, i), so batches and single draws agree bit for bit.
Matrix sample_gaussian(const Matrix& cov, int n_samples, std::uint64_t seed);

GridSample sample_field(const covariance::CovarianceModel& model,
                        const Grid& grid, int n_samples, std::uint64_t seed);

// Unbiased sample covariance of the rows.
Matrix empirical_cov(const Matrix& samples);

// Simulates X on the grid and on {c^E t}, compares the empirical covariance
// of c^{-H} X(c^E .) against that of X(.), with a k-standard-error pass band.
OssTestReport empirical_oss_test(const covariance::CovarianceModel& model,
                                 const Matrix& E, const Matrix& H, double c,
                                 const Grid& grid, int n_samples,
                                 std::uint64_t seed, double k_sigma = 4.0);

}  // namespace fieldsim
}  // namespace ossf
