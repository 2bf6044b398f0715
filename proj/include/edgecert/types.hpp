#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace edgecert {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Numerical tolerances used across the library. Tensor powers amplify
/// roundoff, so everything is collected here instead of being scattered
/// as magic numbers.
struct Tolerances {
  double construction = 1e-12;    // norm, hermiticity, trace checks
  double decomposition = 1e-10;   // eigen/Schmidt residuals, orthonormality
  double rank_cutoff = 1e-10;     // eigenvalues <= cutoff count as zero
  double psd_floor = -1e-10;      // smallest admissible eigenvalue of a density matrix
  double product_detect = 1e-8;   // beta >= 1 - product_detect: subspace contains a product vector
};

const Tolerances& default_tolerances();

/// Bookkeeping of local dimensions for a tensor-product space, plus an
/// optional bipartite cut. Composite indices are row-major with the
/// leftmost local factor most significant, i.e. index = ((i0*d1 + i1)*d2
/// + i2)... This matches the Kronecker product convention and is fixed
/// throughout the project.
struct HilbertDims {
  std::vector<int> locals;
  int cut = 0;  // 0 = no bipartite view, otherwise 1 <= cut < locals.size()

  int ambient() const;
  bool has_cut() const { return cut > 0; }
  int dim_a() const;  // product of locals left of the cut
  int dim_b() const;
  std::vector<int> locals_a() const;
  std::vector<int> locals_b() const;

  bool operator==(const HilbertDims& other) const {
    return locals == other.locals && cut == other.cut;
  }
};

/// Validating constructor; throws std::invalid_argument on bad locals or cut.
HilbertDims make_dims(std::vector<int> locals, int cut = 0);

/// Normalized complex amplitude vector on a tensor-product space.
/// Immutable after construction; treat the public fields as read-only.
struct Ket {
  Vector amps;
  HilbertDims dims;

  Ket(Vector amplitudes, HilbertDims d,
      const Tolerances& tol = default_tolerances());

  /// Copy with a different bipartite cut (same amplitudes).
  Ket with_cut(int cut) const;
};

/// Square complex matrix with dimension metadata. When the hermitian flag
/// is set the constructor checks max|M - M^dagger| against the
/// construction tolerance.
struct Operator {
  Matrix mat;
  HilbertDims dims;
  bool hermitian = true;

  Operator(Matrix entries, HilbertDims d, bool hermitian_flag = true,
           const Tolerances& tol = default_tolerances());

  Operator with_cut(int cut) const;
};

/// Hermitian + unit trace (cheap checks); throws std::invalid_argument
/// naming `role` otherwise. Positivity is checked where an
/// eigendecomposition happens anyway.
void require_density_shape(const Operator& op, const std::string& role,
                           const Tolerances& tol = default_tolerances());

}  // namespace edgecert
