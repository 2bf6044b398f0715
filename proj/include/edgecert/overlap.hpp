#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "edgecert/tensor.hpp"
#include "edgecert/types.hpp"

namespace edgecert {

/// Orthonormal spanning set of a projector's range. Subspaces are kept as
/// spanning vectors, never as dense ambient projectors: for the two-copy
/// Tiles support this means 16 basis kets of length 81 instead of a
/// 6561-entry-squared matrix.
struct Subspace {
  std::vector<Ket> basis;
  HilbertDims dims;
  Matrix basis_matrix;  // ambient x r, columns = basis kets

  explicit Subspace(std::vector<Ket> b, const Tolerances& tol = default_tolerances());

  int dim() const { return static_cast<int>(basis.size()); }

  /// Dense projector P = sum_k |v_k><v_k| (small dims only).
  Matrix projector() const { return basis_matrix * basis_matrix.adjoint(); }
};

/// <a x b| P |a x b> for local unit vectors a, b.
double product_overlap(const Subspace& v, const Vector& a, const Vector& b);

struct SeesawOptions {
  int restarts = 100;
  double tol = 1e-10;
  int max_iter = 500;
  std::uint64_t seed = 0;
  /// Extra deterministic starting points, tried before the random
  /// restarts (counted in `restarts` of the result).
  std::vector<std::pair<Vector, Vector>> warm_starts;
};

/// Best product overlap found, with the maximizer and run diagnostics.
/// `beta` is always the overlap of the reported maximizer, so it is a
/// lower estimate of the true maximum.
struct OverlapResult {
  double beta = 0.0;
  Ket maximizer_a;
  Ket maximizer_b;
  int restarts = 0;
  std::vector<int> iterations_per_restart;
  bool converged = false;  // true only when every restart converged
  std::uint64_t seed = 0;
};

/// Projector onto the eigenvectors of rho with eigenvalue > cutoff.
Subspace support_projector(const Operator& rho, double cutoff);

/// Alternating maximization of <a x b|P|a x b>: fixing a, the optimal b is
/// the top eigenvector of M_B(a) = sum_k c_k c_k^dagger with c_k the B-side
/// vector <a|v_k>, and symmetrically for a. The objective is non-decreasing
/// at every half-step (checked); the result is a lower estimate of the true
/// maximum. Deterministic for a given seed.
OverlapResult seesaw_overlap(const Subspace& v, const SeesawOptions& opts = {});

/// Same maximum through the Schmidt reformulation: alternate
/// psi <- P|a x b>/norm and (a,b) <- top Schmidt pair of psi. Agrees with
/// seesaw_overlap up to solver tolerance.
OverlapResult max_schmidt_over_subspace(const Subspace& v, const SeesawOptions& opts = {});

/// Exhaustive angular grid over product states (local dims <= 3), followed
/// by deterministic window refinement around the best grid point. Every
/// evaluated point is a feasible product state, so the result never
/// exceeds the true maximum. The first full-covering pass has the gap
/// bound brute_force_gap_bound(); refinement only improves the estimate.
double brute_force_overlap(const Subspace& v, int resolution);

/// A-priori bound on (true beta - first-pass grid maximum): the objective
/// is 2-Lipschitz in each local vector and the angle parametrization is
/// 1-Lipschitz per coordinate, giving
///   gap <= (d_A + d_B - 2) * (h_polar + h_phase)
/// with h_polar = (pi/2)/(resolution-1) and h_phase = pi/resolution.
double brute_force_gap_bound(const HilbertDims& dims, int resolution);

/// Subspace spanned by {v_k x phi} with locals regrouped so both A-sides
/// and both B-sides sit on the same side of the new cut.
Subspace attach_pure(const Subspace& v, const Ket& phi);

/// Subspace spanned by all n-fold tensor products of basis vectors,
/// A-sides grouped against B-sides. Throws when |V|^n leaves desk scale.
Subspace tensor_power(const Subspace& v, int n);

}  // namespace edgecert
