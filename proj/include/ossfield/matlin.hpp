#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "ossfield/errors.hpp"

namespace ossf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

namespace matlin {

// Eigenvalues of a real square matrix, ordered by real part.
struct SpectrumSummary {
  std::vector<double> eigen_real_parts;  // sorted ascending, with multiplicity
  std::vector<Complex> eigen_values;     // same order
  double min_real_part = 0.0;
  bool all_positive = false;  // min real part > 0
};

// Jordan-Chevalley splitting M = S + N, SN = NS, N nilpotent.
struct SNDecomposition {
  Matrix semisimple;
  Matrix nilpotent;
};

// Similarity M = P * blockdiag(Z, Q) * P^{-1} where Z carries the
// eigenvalues with |Re| < band and Q the ones with Re >= band.
struct SpectralSplit {
  Matrix conjugacy;       // P, invertible
  Matrix block_zero;      // d1 x d1
  Matrix block_positive;  // d2 x d2
  Eigen::Index dim_zero = 0;
  Eigen::Index dim_positive = 0;
};

// Throws ValidationError if m is empty, not square, or has NaN/Inf entries.
void validate_square(const Matrix& m, const char* what = "matrix");

// exp(M).  Padé scaling-and-squaring; accurate to ~1e-12 relative for the
// small well-scaled exponents this library deals with.
Matrix expm(const Matrix& m);

// c^M = exp(M log c), c > 0.
Matrix mat_power(const Matrix& m, double c);

SpectrumSummary spectrum(const Matrix& m);

// Cluster tolerance is absolute; callers usually pass rel_tol * ||M||.
// Default tol <= 0 means 1e-7 * ||M|| (Frobenius), floored at 1e-12.
SNDecomposition sn_decompose(const Matrix& m, double tol = 0.0);

// Splits along the real-part classes |Re| < zero_band vs Re >= zero_band.
// Eigenvalues with Re <= -zero_band are rejected (inadmissible exponent).
SpectralSplit spectral_split(const Matrix& m, double zero_band = 1e-7);

// Basis of the n x n skew-symmetric matrices, n(n-1)/2 elements.
std::vector<Matrix> skew_basis(Eigen::Index n);

// AB - BA.
Matrix commutator(const Matrix& a, const Matrix& b);

}  // namespace matlin
}  // namespace ossf
