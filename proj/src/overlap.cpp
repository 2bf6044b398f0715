#include "edgecert/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace edgecert {

namespace {

constexpr double kMonotonicitySlack = 1e-12;

// ---------------------------------------------------------------------
// seeded randomness: one root seed, fixed streams per restart
// ---------------------------------------------------------------------

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// explicit mapping engine -> [0,1) so results do not depend on the
// standard library's distribution internals
double uniform01(std::mt19937_64& eng) { return (eng() >> 11) * 0x1.0p-53; }

Complex gaussian(std::mt19937_64& eng) {
  const double u1 = 1.0 - uniform01(eng);  // (0,1]
  const double u2 = uniform01(eng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * std::numbers::pi * u2), r * std::sin(2.0 * std::numbers::pi * u2)};
}

Vector haar_unit(long dim, std::mt19937_64& eng) {
  Vector v(dim);
  for (long i = 0; i < dim; ++i) v(i) = gaussian(eng);
  v /= v.norm();
  return v;
}

// ---------------------------------------------------------------------
// reshaped view of the subspace and the alternating updates
// ---------------------------------------------------------------------

struct ProductProblem {
  long da = 0, db = 0;
  std::vector<Matrix> vmats;  // basis kets reshaped to da x db
};

ProductProblem reshape_problem(const Subspace& v) {
  ProductProblem p;
  p.da = v.dims.dim_a();
  p.db = v.dims.dim_b();
  p.vmats.reserve(v.basis.size());
  for (const Ket& k : v.basis) p.vmats.push_back(detail::cut_matrix(k));
  return p;
}

// top eigenpair of a small Hermitian PSD matrix
std::pair<double, Vector> top_eigenpair(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("seesaw: eigensolver failed");
  }
  const long last = m.rows() - 1;
  return {solver.eigenvalues()(last), solver.eigenvectors().col(last)};
}

double objective(const ProductProblem& p, const Vector& a, const Vector& b) {
  double f = 0.0;
  const Vector ac = a.conjugate();
  const Vector bc = b.conjugate();
  for (const Matrix& vm : p.vmats) {
    const Complex ov = ac.transpose() * vm * bc;
    f += std::norm(ov);
  }
  return f;
}

void check_monotone(double prev, double cur, const char* where) {
  if (cur < prev - kMonotonicitySlack) {
    std::ostringstream os;
    os << where << ": objective decreased from " << prev << " to " << cur;
    throw std::logic_error(os.str());
  }
}

struct RestartOutcome {
  double f = 0.0;
  Vector a, b;
  int iterations = 0;
  bool converged = false;
};

RestartOutcome run_seesaw(const ProductProblem& p, Vector a, Vector b, double tol, int max_iter) {
  double f_full = -1.0;
  double f_half = -1.0;
  RestartOutcome out;
  for (int it = 0; it < max_iter; ++it) {
    // fix a, maximize over b: top eigenvector of M_B(a)
    Matrix mb = Matrix::Zero(p.db, p.db);
    const Vector ac = a.conjugate();
    for (const Matrix& vm : p.vmats) {
      const Vector c = vm.transpose() * ac;  // B-side vector <a|v_k>
      mb.noalias() += c * c.adjoint();
    }
    auto [fb, bnew] = top_eigenpair(mb);
    check_monotone(f_half, fb, "seesaw b-step");
    f_half = fb;
    b = std::move(bnew);

    // fix b, maximize over a
    Matrix ma = Matrix::Zero(p.da, p.da);
    const Vector bc = b.conjugate();
    for (const Matrix& vm : p.vmats) {
      const Vector d = vm * bc;
      ma.noalias() += d * d.adjoint();
    }
    auto [fa, anew] = top_eigenpair(ma);
    check_monotone(f_half, fa, "seesaw a-step");
    f_half = fa;
    a = std::move(anew);

    out.iterations = it + 1;
    if (f_full >= 0.0 && fa - f_full < tol) {
      out.converged = true;
      f_full = fa;
      break;
    }
    f_full = fa;
  }
  out.f = objective(p, a, b);
  out.a = std::move(a);
  out.b = std::move(b);
  return out;
}

RestartOutcome run_schmidt(const Subspace& v, const ProductProblem& p, Vector a, Vector b,
                           double tol, int max_iter) {
  double f_prev = -1.0;
  RestartOutcome out;
  for (int it = 0; it < max_iter; ++it) {
    // project the product vector into V
    const Vector ab = Eigen::kroneckerProduct(a, b).eval();
    Vector coeffs = v.basis_matrix.adjoint() * ab;
    double norm2 = coeffs.squaredNorm();
    if (norm2 < 1e-30) {
      // start was orthogonal to V; fall back to the first basis vector
      coeffs = Vector::Zero(v.dim());
      coeffs(0) = 1.0;
      norm2 = 1.0;
    }
    const Vector psi = (v.basis_matrix * coeffs) / std::sqrt(norm2);

    // replace (a,b) by the top Schmidt pair of psi
    Matrix m(p.da, p.db);
    for (long ia = 0; ia < p.da; ++ia)
      for (long ib = 0; ib < p.db; ++ib) m(ia, ib) = psi(ia * p.db + ib);
    Eigen::VectorXd sv;
    Matrix u, v;
    detail::thin_svd(m, sv, u, v);
    a = u.col(0);
    b = v.col(0).conjugate();

    const double f = objective(p, a, b);
    check_monotone(f_prev, f, "schmidt step");
    out.iterations = it + 1;
    if (f_prev >= 0.0 && f - f_prev < tol) {
      out.converged = true;
      f_prev = f;
      break;
    }
    f_prev = f;
  }
  out.f = f_prev;
  out.a = std::move(a);
  out.b = std::move(b);
  return out;
}

template <typename RunFromStart>
OverlapResult multistart(const Subspace& v, const SeesawOptions& opts, RunFromStart run) {
  if (opts.restarts < 1) throw std::invalid_argument("seesaw: restarts must be >= 1");
  if (opts.tol <= 0.0) throw std::invalid_argument("seesaw: tol must be positive");
  if (opts.max_iter < 1) throw std::invalid_argument("seesaw: max_iter must be >= 1");
  const long da = v.dims.dim_a();
  const long db = v.dims.dim_b();

  std::vector<int> iters;
  bool all_converged = true;
  double best = -1.0;
  Vector best_a, best_b;

  auto consume = [&](const RestartOutcome& r) {
    iters.push_back(r.iterations);
    all_converged = all_converged && r.converged;
    if (r.f > best) {  // ties resolved by first restart index
      best = r.f;
      best_a = r.a;
      best_b = r.b;
    }
  };

  for (const auto& [wa, wb] : opts.warm_starts) {
    if (wa.size() != da || wb.size() != db) {
      throw std::invalid_argument("seesaw: warm start has wrong local dimensions");
    }
    consume(run(wa.normalized(), wb.normalized()));
  }
  for (int r = 0; r < opts.restarts; ++r) {
    auto eng = stream_engine(opts.seed, static_cast<std::uint64_t>(r));
    consume(run(haar_unit(da, eng), haar_unit(db, eng)));
  }

  OverlapResult res{best,
                    Ket(best_a, make_dims(v.dims.locals_a())),
                    Ket(best_b, make_dims(v.dims.locals_b())),
                    static_cast<int>(iters.size()),
                    std::move(iters),
                    all_converged,
                    opts.seed};
  return res;
}

}  // namespace

Subspace::Subspace(std::vector<Ket> b, const Tolerances& tol) : basis(std::move(b)) {
  if (basis.empty()) throw std::invalid_argument("Subspace: empty basis");
  dims = basis.front().dims;
  if (!dims.has_cut()) throw std::invalid_argument("Subspace: basis kets need a bipartite cut");
  for (const Ket& k : basis) {
    if (!(k.dims == dims)) throw std::invalid_argument("Subspace: mixed dimensions in basis");
  }
  const long d = dims.ambient();
  basis_matrix.resize(d, static_cast<long>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) basis_matrix.col(k) = basis[k].amps;
  const Matrix gram = basis_matrix.adjoint() * basis_matrix;
  const double dev = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (dev > tol.decomposition) {
    std::ostringstream os;
    os << "Subspace: basis not orthonormal (gram deviation " << dev << ")";
    throw std::invalid_argument(os.str());
  }
}

double product_overlap(const Subspace& v, const Vector& a, const Vector& b) {
  if (a.size() != v.dims.dim_a() || b.size() != v.dims.dim_b()) {
    throw std::invalid_argument("product_overlap: local vector dimensions do not match the cut");
  }
  const Vector ab = Eigen::kroneckerProduct(a, b).eval();
  return (v.basis_matrix.adjoint() * ab).squaredNorm();
}

Subspace support_projector(const Operator& rho, double cutoff) {
  if (!rho.hermitian) {
    throw std::invalid_argument("support_projector: operator is not marked hermitian");
  }
  const Spectrum sp = spectral(rho);
  if (sp.eigenvalues.back() < default_tolerances().psd_floor) {
    std::ostringstream os;
    os << "support_projector: input not positive semidefinite (min eigenvalue "
       << sp.eigenvalues.back() << ")";
    throw std::invalid_argument(os.str());
  }
  std::vector<Ket> basis;
  for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
    if (sp.eigenvalues[i] > cutoff) basis.push_back(sp.eigenvectors[i]);
  }
  if (basis.empty()) {
    throw std::invalid_argument("support_projector: all eigenvalues below cutoff");
  }
  return Subspace(std::move(basis));
}

OverlapResult seesaw_overlap(const Subspace& v, const SeesawOptions& opts) {
  const ProductProblem p = reshape_problem(v);
  return multistart(v, opts, [&](Vector a, Vector b) {
    return run_seesaw(p, std::move(a), std::move(b), opts.tol, opts.max_iter);
  });
}

OverlapResult max_schmidt_over_subspace(const Subspace& v, const SeesawOptions& opts) {
  const ProductProblem p = reshape_problem(v);
  return multistart(v, opts, [&](Vector a, Vector b) {
    return run_schmidt(v, p, std::move(a), std::move(b), opts.tol, opts.max_iter);
  });
}

// ---------------------------------------------------------------------
// brute force: angular product grid with window refinement
// ---------------------------------------------------------------------

namespace {

constexpr int kRefinePasses = 8;
constexpr double kWindowShrink = 0.35;

// unit vector in C^d from d-1 polar angles and d-1 phases; the first
// component is kept real, which is no loss for the overlap objective
Vector unit_from_angles(int d, const std::vector<double>& ang) {
  Vector v(d);
  double prod = 1.0;
  for (int i = 0; i < d; ++i) {
    double mod = prod;
    if (i < d - 1) mod *= std::cos(ang[i]);
    if (i == 0) {
      v(i) = mod;
    } else {
      const double ph = ang[d - 1 + i - 1];
      v(i) = Complex(mod * std::cos(ph), mod * std::sin(ph));
    }
    if (i < d - 1) prod *= std::sin(ang[i]);
  }
  return v;
}

struct SideGrid {
  std::vector<Vector> points;
  std::vector<std::vector<double>> angles;
};

// center/width describe a window per angle; polar axes are clamped to
// [0, pi/2], phase axes are free (the objective is 2pi-periodic)
SideGrid build_side_grid(int d, int res, const std::vector<double>& center,
                         const std::vector<double>& width) {
  const int n_polar = d - 1;
  const int n_ang = 2 * (d - 1);
  std::vector<std::vector<double>> axes(n_ang);
  for (int i = 0; i < n_ang; ++i) {
    const bool polar = i < n_polar;
    double lo = center[i] - width[i] / 2.0;
    double hi = center[i] + width[i] / 2.0;
    if (polar) {
      lo = std::max(lo, 0.0);
      hi = std::min(hi, std::numbers::pi / 2.0);
    }
    const int count = polar ? res : 2 * res;
    axes[i].resize(count);
    if (!polar && width[i] >= 2.0 * std::numbers::pi - 1e-14) {
      // full circle: avoid duplicating 0 and 2pi
      for (int k = 0; k < count; ++k) axes[i][k] = lo + width[i] * k / count;
    } else {
      for (int k = 0; k < count; ++k) {
        axes[i][k] = count == 1 ? (lo + hi) / 2.0 : lo + (hi - lo) * k / (count - 1);
      }
    }
  }

  SideGrid g;
  std::vector<int> idx(n_ang, 0);
  std::vector<double> ang(n_ang);
  while (true) {
    for (int i = 0; i < n_ang; ++i) ang[i] = axes[i][idx[i]];
    g.angles.push_back(ang);
    g.points.push_back(unit_from_angles(d, ang));
    int i = n_ang - 1;
    while (i >= 0 && ++idx[i] == static_cast<int>(axes[i].size())) idx[i--] = 0;
    if (i < 0) break;
  }
  return g;
}

}  // namespace

double brute_force_gap_bound(const HilbertDims& dims, int resolution) {
  if (resolution < 2) throw std::invalid_argument("brute_force: resolution must be >= 2");
  const double h_polar = (std::numbers::pi / 2.0) / (resolution - 1);
  const double h_phase = std::numbers::pi / resolution;
  return (dims.dim_a() + dims.dim_b() - 2) * (h_polar + h_phase);
}

double brute_force_overlap(const Subspace& v, int resolution) {
  const int da = v.dims.dim_a();
  const int db = v.dims.dim_b();
  if (da > 3 || db > 3) {
    throw std::invalid_argument("brute_force_overlap: local dimensions above 3 are unsupported");
  }
  if (resolution < 2) throw std::invalid_argument("brute_force: resolution must be >= 2");

  const ProductProblem p = reshape_problem(v);
  const int r = static_cast<int>(p.vmats.size());

  double best = -1.0;
  std::vector<double> best_a, best_b;

  std::vector<double> center_a(2 * (da - 1)), width_a(2 * (da - 1));
  std::vector<double> center_b(2 * (db - 1)), width_b(2 * (db - 1));
  for (int i = 0; i < da - 1; ++i) {
    center_a[i] = std::numbers::pi / 4.0;
    width_a[i] = std::numbers::pi / 2.0;
    center_a[da - 1 + i] = std::numbers::pi;
    width_a[da - 1 + i] = 2.0 * std::numbers::pi;
  }
  for (int i = 0; i < db - 1; ++i) {
    center_b[i] = std::numbers::pi / 4.0;
    width_b[i] = std::numbers::pi / 2.0;
    center_b[db - 1 + i] = std::numbers::pi;
    width_b[db - 1 + i] = 2.0 * std::numbers::pi;
  }

  for (int pass = 0; pass <= kRefinePasses; ++pass) {
    const SideGrid ga = build_side_grid(da, resolution, center_a, width_a);
    const SideGrid gb = build_side_grid(db, resolution, center_b, width_b);

    // precompute B-side partials <a|v_k> for every a in the grid
    //   f(a,b) = sum_k |c_k . conj(b)|^2 = || C(a) conj(b) ||^2
    std::vector<Matrix> partials(ga.points.size(), Matrix(r, db));
    for (std::size_t ia = 0; ia < ga.points.size(); ++ia) {
      const Vector ac = ga.points[ia].conjugate();
      for (int k = 0; k < r; ++k) partials[ia].row(k) = (p.vmats[k].transpose() * ac).transpose();
    }
    std::vector<Vector> bconj(gb.points.size());
    for (std::size_t ib = 0; ib < gb.points.size(); ++ib) bconj[ib] = gb.points[ib].conjugate();

    for (std::size_t ia = 0; ia < ga.points.size(); ++ia) {
      const Matrix& c = partials[ia];
      for (std::size_t ib = 0; ib < gb.points.size(); ++ib) {
        const double f = (c * bconj[ib]).squaredNorm();
        if (f > best) {
          best = f;
          best_a = ga.angles[ia];
          best_b = gb.angles[ib];
        }
      }
    }

    // shrink the window around the best point seen so far
    center_a = best_a;
    center_b = best_b;
    for (double& w : width_a) w *= kWindowShrink;
    for (double& w : width_b) w *= kWindowShrink;
  }
  return best;
}

// ---------------------------------------------------------------------
// subspace constructions
// ---------------------------------------------------------------------

Subspace attach_pure(const Subspace& v, const Ket& phi) {
  if (!phi.dims.has_cut()) throw std::invalid_argument("attach_pure: phi needs a bipartite cut");
  const int nv = static_cast<int>(v.dims.locals.size());
  const int cv = v.dims.cut;
  const int np = static_cast<int>(phi.dims.locals.size());
  const int cp = phi.dims.cut;

  std::vector<int> perm;
  perm.reserve(nv + np);
  for (int i = 0; i < cv; ++i) perm.push_back(i);            // A-side of v
  for (int i = 0; i < cp; ++i) perm.push_back(nv + i);       // A-side of phi
  for (int i = cv; i < nv; ++i) perm.push_back(i);           // B-side of v
  for (int i = cp; i < np; ++i) perm.push_back(nv + i);      // B-side of phi

  std::vector<Ket> basis;
  basis.reserve(v.basis.size());
  for (const Ket& k : v.basis) {
    basis.push_back(permute_factors(tensor(k, phi), perm, cv + cp));
  }
  return Subspace(std::move(basis));
}

Subspace tensor_power(const Subspace& v, int n) {
  if (n < 1) throw std::invalid_argument("tensor_power: n must be >= 1");
  if (n == 1) return v;

  const int r = v.dim();
  const long d = v.dims.ambient();
  double basis_count = std::pow(static_cast<double>(r), n);
  double entries = basis_count * std::pow(static_cast<double>(d), n);
  if (basis_count > 4096.0 || entries > 5e7) {
    std::ostringstream os;
    os << "tensor_power: budget exceeded (" << r << "^" << n << " basis vectors on dimension "
       << d << "^" << n << ")";
    throw std::invalid_argument(os.str());
  }

  const int nv = static_cast<int>(v.dims.locals.size());
  const int cv = v.dims.cut;
  // natural order [A1 B1 A2 B2 ...] -> [A1..An B1..Bn]
  std::vector<int> perm;
  perm.reserve(nv * n);
  for (int copy = 0; copy < n; ++copy)
    for (int i = 0; i < cv; ++i) perm.push_back(copy * nv + i);
  for (int copy = 0; copy < n; ++copy)
    for (int i = cv; i < nv; ++i) perm.push_back(copy * nv + i);

  std::vector<Ket> basis;
  basis.reserve(static_cast<std::size_t>(basis_count));
  std::vector<int> tuple(n, 0);
  while (true) {
    Ket prod = v.basis[tuple[0]];
    for (int copy = 1; copy < n; ++copy) prod = tensor(prod, v.basis[tuple[copy]]);
    basis.push_back(permute_factors(prod, perm, n * cv));
    int i = n - 1;
    while (i >= 0 && ++tuple[i] == r) tuple[i--] = 0;
    if (i < 0) break;
  }
  return Subspace(std::move(basis));
}

}  // namespace edgecert
