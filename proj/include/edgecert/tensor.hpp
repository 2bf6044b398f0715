#pragma once

#include <vector>

#include "edgecert/types.hpp"

namespace edgecert {

/// Bipartite Schmidt data: |psi> = sum_i sqrt(lambda_i) |u_i> x |v_i>
/// with lambda_1 >= lambda_2 >= ... and orthonormal u_i, v_i.
struct SchmidtForm {
  std::vector<double> coefficients;  // lambda_i, non-increasing, sum 1
  std::vector<Ket> left_vectors;
  std::vector<Ket> right_vectors;
};

/// Full eigendecomposition of a Hermitian operator, eigenvalues
/// non-increasing. Within a degenerate cluster the individual eigenvector
/// directions are unspecified (only the spanned subspace is); callers must
/// not depend on them.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<Ket> eigenvectors;
};

enum class Side { A, B };

/// Kronecker composite; dims.locals is the concatenation of the inputs'
/// locals. The result carries no bipartite cut (use permute_factors or
/// with_cut to set one).
Ket tensor(const Ket& x, const Ket& y);
Operator tensor(const Operator& x, const Operator& y);

/// Reorders the local tensor factors. perm[i] is the source factor that
/// lands in slot i of the result. new_cut is the cut of the result
/// (0 = none).
Ket permute_factors(const Ket& psi, const std::vector<int>& perm, int new_cut = 0);
Operator permute_factors(const Operator& op, const std::vector<int>& perm, int new_cut = 0);

/// Traces out all factors not listed in `keep` (0-based, strictly
/// increasing). The result keeps a bipartite cut when the kept factors
/// straddle the input cut, otherwise it carries none.
Operator partial_trace(const Operator& op, const std::vector<int>& keep);

/// Transpose on one side of the bipartite cut. Exact involution:
/// applying twice returns the input bit-for-bit.
Operator partial_transpose(const Operator& op, Side side);

/// Eigendecomposition of a Hermitian operator (hermitian flag required).
Spectrum spectral(const Operator& op);

/// Schmidt decomposition across the Ket's bipartite cut.
SchmidtForm schmidt(const Ket& psi);

namespace detail {
// Single internal entry point for Hermitian eigensolves so the kernel can
// be swapped; returns eigenvalues ascending, orthonormal columns.
void hermitian_eig(const Matrix& m, Eigen::VectorXd& values, Matrix& vectors);
// Eigenvalues only, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);
// Thin SVD behind the same swappable boundary; singular values descending.
void thin_svd(const Matrix& m, Eigen::VectorXd& singular_values, Matrix& u, Matrix& v);
// Reshape a ket across its cut into the dim_a x dim_b coefficient matrix
// M(ia, ib) = amps(ia * dim_b + ib).
Matrix cut_matrix(const Ket& psi);
}  // namespace detail

}  // namespace edgecert
