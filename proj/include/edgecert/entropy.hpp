#pragma once

#include <vector>

#include "edgecert/overlap.hpp"
#include "edgecert/types.hpp"

namespace edgecert {

/// S(rho||sigma) in bits; +infinity exactly when the support of rho is not
/// contained in the support of sigma.
struct RelEntropyValue {
  double value = 0.0;
  bool support_contained = true;
};

enum class SetChoice { Sep, PPT };

const char* to_string(SetChoice s);

/// Witness that (I + cP)/(D + c r) lies inside the separable Frobenius
/// ball of radius 1/sqrt(D(D-1)) around I/D. `c` is the largest value for
/// which the certified distance reaches the radius.
struct SeparabilityCertificate {
  double c = 0.0;
  double ball_radius = 0.0;
  double distance = 0.0;
  int D = 0;
  int r = 0;
};

/// alpha = (1 + alpha1 c)/(1 + c); per-copy contraction constant of the
/// product overlap under tensor powers, alpha1 < alpha < 1.
struct AlphaBound {
  double alpha1 = 0.0;
  double c = 0.0;
  double alpha = 0.0;
};

/// t = tr(P sigma) and sigma' = P sigma P / t.
struct PinchDecomposition {
  double t = 0.0;
  Operator sigma_prime;
};

/// Quantum relative entropy tr(rho log2 rho - rho log2 sigma), evaluated
/// on the support of rho. Kernel overlap above the rank cutoff triggers
/// the +infinity branch.
RelEntropyValue relative_entropy(const Operator& rho, const Operator& sigma);

/// Pinching map E(tau) = P tau P + (I-P) tau (I-P); trace preserving and
/// completely positive, so relative entropy can only decrease under it.
Operator pinch(const Subspace& p, const Operator& tau);

PinchDecomposition pinch_decomposition(const Subspace& p, const Operator& sigma);

/// -log2(beta): lower bound on the relative entropy of entanglement with
/// respect to separable states, for beta the maximal product overlap with
/// the support projector.
double esep_lower_bound(double beta);

/// Largest c with (I + cP)/(D + cr) inside the adopted separable ball:
///   distance(c) = c sqrt(r(D-r)) / (sqrt(D) (D + c r))
///   radius      = 1 / sqrt(D(D-1))
/// giving c = D / (sqrt(r(D-r)(D-1)) - r). Any smaller c stays strictly
/// inside the ball and remains a valid (weaker) certificate.
SeparabilityCertificate separability_ball_c(const Subspace& v);

AlphaBound alpha_bound(double alpha1, const SeparabilityCertificate& cert);

/// -log2(alpha): per-copy lower bound surviving regularization.
double regularized_lower_bound(const AlphaBound& ab);

struct PptResult {
  bool is_ppt = false;
  double min_eigenvalue = 0.0;
};

/// Positive partial transpose test across the operator's bipartite cut.
PptResult ppt_check(const Operator& rho);

/// E_PPT is zero for a PPT state (the state itself is in the set);
/// throws when the input is not PPT.
RelEntropyValue e_ppt_trivial(const Operator& rho);

/// min_i S(rho||candidate_i) over separable-by-construction candidates;
/// candidates whose support misses rho's contribute +infinity and are
/// skipped. Throws when the list is empty or no candidate is finite.
double esep_upper_bound(const Operator& rho, const std::vector<Operator>& candidates);

/// -N log2(alpha) + M: lower bound on E_Sep of N copies of the edge state
/// together with M EPR pairs; strictly greater than M.
double combined_bound(int n_copies, int m_epr, const AlphaBound& ab);

}  // namespace edgecert
