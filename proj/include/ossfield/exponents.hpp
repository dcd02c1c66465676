#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ossfield/matlin.hpp"

namespace ossf {
namespace exponents {

enum class GroupKind { kOrthogonal, kSpecialOrthogonal, kFinite, kTrivial };

// A closed matrix group given by name, by a finite element list, or trivial.
class GroupSpec {
 public:
  static GroupSpec orthogonal(Eigen::Index n);
  static GroupSpec special_orthogonal(Eigen::Index n);
  static GroupSpec trivial(Eigen::Index n);
  // `elements` must list the full group, closed under inverse within tol.
  static GroupSpec finite(std::vector<Matrix> elements, double tol = 1e-9);

  GroupKind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  const std::vector<Matrix>& elements() const { return elements_; }

  // Deterministic enumeration of group elements for commutator checks:
  // uniform rotation angles (both coset classes for O(2)), Haar samples from
  // a fixed stream for n >= 3, the listed elements for finite groups.
  std::vector<Matrix> sample_elements(int count) const;

 private:
  GroupSpec(GroupKind kind, Eigen::Index dim) : kind_(kind), dim_(dim) {}
  GroupKind kind_;
  Eigen::Index dim_;
  std::vector<Matrix> elements_;  // finite kind only
};

enum class Side { kRange, kDomain };

// The affine family base + span(tangent_basis); every member shares the
// base's real spectrum and nilpotent part.
struct ExponentFamily {
  Matrix base;
  std::vector<Matrix> tangent_basis;
  Side side = Side::kRange;
  GroupSpec group = GroupSpec::trivial(1);

  Matrix member(const std::vector<double>& coeffs) const;
};

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<std::string> reasons;  // empty when admissible
};

struct FamilyReport {
  bool passed = false;
  double max_spectrum_deviation = 0.0;
  double max_nilpotent_deviation = 0.0;
  double max_nilpotent_commutator = 0.0;
  int samples = 0;
};

struct HaarConfig {
  int rotation_nodes = 512;      // trapezoid nodes for SO(2)/O(2), exact
  int samples = 100000;          // Haar samples for n >= 3 (error ~ 1/sqrt(N))
  std::uint64_t seed = 2026ULL;  // fixed stream, deterministic enumeration
};

// T(G): skew-symmetric basis for the orthogonal groups, empty for finite
// and trivial groups.
std::vector<Matrix> tangent_basis(const GroupSpec& g);

ExponentFamily exponent_family(const Matrix& base, const GroupSpec& g, Side side);

// H0 = int A H A^{-1} dHaar(A); commutes with every group element and has
// the same trace as H.  Exact for n = 2, sampled for n >= 3.
Matrix haar_commuting_exponent(const Matrix& h, const GroupSpec& g,
                               const HaarConfig& cfg = {});

FamilyReport family_invariants_check(const ExponentFamily& fam, int samples,
                                     double tol);

// True iff the two tangent spans coincide (mutual projection residual <= tol).
bool set_difference_check(const ExponentFamily& fam1, const ExponentFamily& fam2,
                          double tol);

// Nonnegative real parts, and zero-real-part eigenvalues simple in the
// minimal polynomial (geometric multiplicity = algebraic).
AdmissibilityReport admissibility_check(const Matrix& h, double tol = 1e-9);

// False iff some eigenvalue real-part pair of (E, H) has strictly opposite
// signs beyond tol.
bool opposite_sign_check(const Matrix& e, const Matrix& h, double tol = 1e-9);

// Covariance Sigma = P P^T with r^{H1} Sigma (r^{H1})^T = Sigma for every
// r > 0; requires H1 semisimple with purely imaginary spectrum.
Matrix invariant_gaussian(const Matrix& h1);

// Admissible H split into the zero-real-part block (verified semisimple)
// and the positive-stable block.
matlin::SpectralSplit decompose_field_exponent(const Matrix& h, double tol = 1e-7);

}  // namespace exponents
}  // namespace ossf
