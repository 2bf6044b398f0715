#include "edgecert/entropy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace edgecert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log2_safe(double x) { return std::log2(x); }

}  // namespace

const char* to_string(SetChoice s) { return s == SetChoice::Sep ? "Sep" : "PPT"; }

RelEntropyValue relative_entropy(const Operator& rho, const Operator& sigma) {
  if (!(rho.dims.locals == sigma.dims.locals)) {
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  }
  require_density_shape(rho, "relative_entropy(rho)");
  require_density_shape(sigma, "relative_entropy(sigma)");
  const Tolerances& tol = default_tolerances();

  const Spectrum srho = spectral(rho);
  const Spectrum ssigma = spectral(sigma);

  // overlap of rho with the kernel of sigma decides the +infinity branch
  double kernel_overlap = 0.0;
  for (std::size_t j = 0; j < ssigma.eigenvalues.size(); ++j) {
    if (ssigma.eigenvalues[j] <= tol.rank_cutoff) {
      const Vector& w = ssigma.eigenvectors[j].amps;
      kernel_overlap += std::real(w.dot(rho.mat * w));
    }
  }
  if (kernel_overlap > tol.rank_cutoff) return {kInf, false};

  double s = 0.0;
  for (double p : srho.eigenvalues) {
    if (p > tol.rank_cutoff) s += p * log2_safe(p);
  }
  for (std::size_t j = 0; j < ssigma.eigenvalues.size(); ++j) {
    const double q = ssigma.eigenvalues[j];
    if (q > tol.rank_cutoff) {
      const Vector& w = ssigma.eigenvectors[j].amps;
      s -= std::real(w.dot(rho.mat * w)) * log2_safe(q);
    }
  }
  return {s, true};
}

Operator pinch(const Subspace& p, const Operator& tau) {
  if (p.dims.ambient() != tau.dims.ambient()) {
    throw std::invalid_argument("pinch: dimension mismatch");
  }
  const Matrix proj = p.projector();
  const Matrix comp = Matrix::Identity(proj.rows(), proj.cols()) - proj;
  Matrix out = proj * tau.mat * proj + comp * tau.mat * comp;
  // enforce exact hermiticity against roundoff from the two products
  out = ((out + out.adjoint()) / 2.0).eval();
  return Operator(std::move(out), tau.dims, tau.hermitian);
}

PinchDecomposition pinch_decomposition(const Subspace& p, const Operator& sigma) {
  if (p.dims.ambient() != sigma.dims.ambient()) {
    throw std::invalid_argument("pinch_decomposition: dimension mismatch");
  }
  require_density_shape(sigma, "pinch_decomposition");
  const Matrix proj = p.projector();
  const double t = (proj * sigma.mat).trace().real();
  if (t <= 0.0) {
    throw std::invalid_argument("pinch_decomposition: sigma has no weight on the subspace");
  }
  Matrix sp = (proj * sigma.mat * proj) / t;
  sp = ((sp + sp.adjoint()) / 2.0).eval();
  return {t, Operator(std::move(sp), sigma.dims, true)};
}

double esep_lower_bound(double beta) {
  // tolerate harmless roundoff just above 1
  if (beta > 1.0 && beta <= 1.0 + 1e-10) beta = 1.0;
  if (beta <= 0.0 || beta > 1.0) {
    std::ostringstream os;
    os << "esep_lower_bound: beta = " << beta << " outside (0, 1]";
    throw std::invalid_argument(os.str());
  }
  return -log2_safe(beta);
}

SeparabilityCertificate separability_ball_c(const Subspace& v) {
  const int d = v.dims.ambient();
  const int r = v.dim();
  if (r >= d) {
    throw std::invalid_argument("separability_ball_c: subspace has no complement (r = D)");
  }
  const double denom = std::sqrt(static_cast<double>(r) * (d - r) * (d - 1)) - r;
  if (denom <= 0.0) {
    // only reachable at r = D-1, where the certified distance approaches
    // the radius from below for every finite c
    throw std::domain_error("separability_ball_c: no finite maximizer for r = D-1");
  }
  SeparabilityCertificate cert;
  cert.D = d;
  cert.r = r;
  cert.c = d / denom;
  cert.ball_radius = 1.0 / std::sqrt(static_cast<double>(d) * (d - 1));
  cert.distance = cert.c * std::sqrt(static_cast<double>(r) * (d - r)) /
                  (std::sqrt(static_cast<double>(d)) * (d + cert.c * r));
  if (cert.distance > cert.ball_radius + default_tolerances().construction) {
    throw std::logic_error("separability_ball_c: solved c violates the ball condition");
  }
  return cert;
}

AlphaBound alpha_bound(double alpha1, const SeparabilityCertificate& cert) {
  if (alpha1 >= 1.0) {
    std::ostringstream os;
    os << "alpha_bound: alpha1 = " << alpha1
       << " >= 1; the subspace contains a product vector and no bound follows";
    throw std::invalid_argument(os.str());
  }
  if (alpha1 <= 0.0) throw std::invalid_argument("alpha_bound: alpha1 must be positive");
  if (cert.c <= 0.0) throw std::invalid_argument("alpha_bound: certificate has no positive c");
  AlphaBound ab;
  ab.alpha1 = alpha1;
  ab.c = cert.c;
  ab.alpha = (1.0 + alpha1 * cert.c) / (1.0 + cert.c);
  return ab;
}

double regularized_lower_bound(const AlphaBound& ab) { return -log2_safe(ab.alpha); }

PptResult ppt_check(const Operator& rho) {
  require_density_shape(rho, "ppt_check");
  const Operator pt = partial_transpose(rho, Side::B);
  const Eigen::VectorXd ev = detail::hermitian_eigenvalues(pt.mat);
  const double min_ev = ev(0);
  return {min_ev >= default_tolerances().psd_floor, min_ev};
}

RelEntropyValue e_ppt_trivial(const Operator& rho) {
  const PptResult p = ppt_check(rho);
  if (!p.is_ppt) {
    std::ostringstream os;
    os << "e_ppt_trivial: state is not PPT (min partial-transpose eigenvalue "
       << p.min_eigenvalue << ")";
    throw std::invalid_argument(os.str());
  }
  // sigma = rho itself lies in the PPT set, so the minimum is zero
  return {0.0, true};
}

double esep_upper_bound(const Operator& rho, const std::vector<Operator>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("esep_upper_bound: empty candidate list");
  double best = kInf;
  for (const Operator& cand : candidates) {
    const RelEntropyValue s = relative_entropy(rho, cand);
    if (s.support_contained && s.value < best) best = s.value;
  }
  if (!std::isfinite(best)) {
    throw std::runtime_error("esep_upper_bound: every candidate misses the support of rho");
  }
  return best;
}

double combined_bound(int n_copies, int m_epr, const AlphaBound& ab) {
  if (n_copies < 1) throw std::invalid_argument("combined_bound: N must be >= 1");
  if (m_epr < 0) throw std::invalid_argument("combined_bound: M must be >= 0");
  return -static_cast<double>(n_copies) * log2_safe(ab.alpha) + static_cast<double>(m_epr);
}

}  // namespace edgecert
