#include "edgecert/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace edgecert {

namespace {

std::vector<int> concat_locals(const HilbertDims& x, const HilbertDims& y) {
  std::vector<int> locals = x.locals;
  locals.insert(locals.end(), y.locals.begin(), y.locals.end());
  return locals;
}

// Strides of the row-major composite index, leftmost factor most significant.
std::vector<long> strides_of(const std::vector<int>& locals) {
  std::vector<long> s(locals.size());
  long acc = 1;
  for (int i = static_cast<int>(locals.size()) - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= locals[i];
  }
  return s;
}

void check_perm(const std::vector<int>& perm, std::size_t n) {
  if (perm.size() != n) throw std::invalid_argument("permute_factors: permutation length mismatch");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= static_cast<int>(n) || seen[p]) {
      throw std::invalid_argument("permute_factors: not a permutation of the factors");
    }
    seen[p] = true;
  }
}

// index map: for each composite index of the permuted space, the source
// composite index it reads from.
std::vector<long> permutation_index_map(const std::vector<int>& locals,
                                        const std::vector<int>& perm) {
  const std::vector<long> src_strides = strides_of(locals);
  std::vector<int> new_locals(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) new_locals[i] = locals[perm[i]];
  const std::vector<long> dst_strides = strides_of(new_locals);

  long ambient = 1;
  for (int l : locals) ambient *= l;

  std::vector<long> map(ambient);
  for (long dst = 0; dst < ambient; ++dst) {
    long rem = dst;
    long src = 0;
    for (std::size_t slot = 0; slot < perm.size(); ++slot) {
      const long digit = rem / dst_strides[slot];
      rem %= dst_strides[slot];
      src += digit * src_strides[perm[slot]];
    }
    map[dst] = src;
  }
  return map;
}

}  // namespace

Ket tensor(const Ket& x, const Ket& y) {
  Vector amps = Eigen::kroneckerProduct(x.amps, y.amps).eval();
  return Ket(std::move(amps), make_dims(concat_locals(x.dims, y.dims)));
}

Operator tensor(const Operator& x, const Operator& y) {
  Matrix m = Eigen::kroneckerProduct(x.mat, y.mat).eval();
  return Operator(std::move(m), make_dims(concat_locals(x.dims, y.dims)),
                  x.hermitian && y.hermitian);
}

Ket permute_factors(const Ket& psi, const std::vector<int>& perm, int new_cut) {
  check_perm(perm, psi.dims.locals.size());
  const auto map = permutation_index_map(psi.dims.locals, perm);
  Vector out(psi.amps.size());
  for (long i = 0; i < out.size(); ++i) out(i) = psi.amps(map[i]);
  std::vector<int> new_locals(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) new_locals[i] = psi.dims.locals[perm[i]];
  return Ket(std::move(out), make_dims(std::move(new_locals), new_cut));
}

Operator permute_factors(const Operator& op, const std::vector<int>& perm, int new_cut) {
  check_perm(perm, op.dims.locals.size());
  const auto map = permutation_index_map(op.dims.locals, perm);
  const long n = op.mat.rows();
  Matrix out(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) out(i, j) = op.mat(map[i], map[j]);
  std::vector<int> new_locals(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) new_locals[i] = op.dims.locals[perm[i]];
  return Operator(std::move(out), make_dims(std::move(new_locals), new_cut), op.hermitian);
}

Operator partial_trace(const Operator& op, const std::vector<int>& keep) {
  require_density_shape(op, "partial_trace");
  const int n_factors = static_cast<int>(op.dims.locals.size());
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n_factors ||
        (i > 0 && keep[i] <= keep[i - 1])) {
      throw std::invalid_argument("partial_trace: invalid index set");
    }
  }

  const std::vector<long> strides = strides_of(op.dims.locals);
  std::vector<int> kept_locals;
  for (int k : keep) kept_locals.push_back(op.dims.locals[k]);
  std::vector<int> traced;
  for (int f = 0; f < n_factors; ++f) {
    if (!std::binary_search(keep.begin(), keep.end(), f)) traced.push_back(f);
  }

  long dim_keep = 1;
  for (int l : kept_locals) dim_keep *= l;

  // decompose every ambient index into (kept composite, traced composite)
  const long ambient = op.dims.ambient();
  std::vector<long> kpart(ambient), tpart(ambient);
  {
    const std::vector<long> keep_strides = strides_of(kept_locals);
    std::vector<int> traced_locals;
    for (int f : traced) traced_locals.push_back(op.dims.locals[f]);
    const std::vector<long> traced_strides = strides_of(traced_locals);
    for (long i = 0; i < ambient; ++i) {
      long k = 0, t = 0;
      for (std::size_t s = 0; s < keep.size(); ++s) {
        k += ((i / strides[keep[s]]) % op.dims.locals[keep[s]]) * keep_strides[s];
      }
      for (std::size_t s = 0; s < traced.size(); ++s) {
        t += ((i / strides[traced[s]]) % op.dims.locals[traced[s]]) * traced_strides[s];
      }
      kpart[i] = k;
      tpart[i] = t;
    }
  }

  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  for (long i = 0; i < ambient; ++i) {
    for (long j = 0; j < ambient; ++j) {
      if (tpart[i] == tpart[j]) out(kpart[i], kpart[j]) += op.mat(i, j);
    }
  }

  // keep the bipartite view when the kept factors straddle the input cut
  int new_cut = 0;
  if (op.dims.has_cut()) {
    int left = 0;
    for (int k : keep) {
      if (k < op.dims.cut) ++left;
    }
    if (left >= 1 && left < static_cast<int>(keep.size())) new_cut = left;
  }
  return Operator(std::move(out), make_dims(std::move(kept_locals), new_cut), op.hermitian);
}

Operator partial_transpose(const Operator& op, Side side) {
  if (!op.dims.has_cut()) {
    throw std::invalid_argument("partial_transpose: operator has no bipartite cut");
  }
  const long da = op.dims.dim_a();
  const long db = op.dims.dim_b();
  Matrix out(da * db, da * db);
  for (long ia = 0; ia < da; ++ia)
    for (long ib = 0; ib < db; ++ib)
      for (long ja = 0; ja < da; ++ja)
        for (long jb = 0; jb < db; ++jb) {
          if (side == Side::B) {
            out(ia * db + ib, ja * db + jb) = op.mat(ia * db + jb, ja * db + ib);
          } else {
            out(ia * db + ib, ja * db + jb) = op.mat(ja * db + ib, ia * db + jb);
          }
        }
  return Operator(std::move(out), op.dims, op.hermitian);
}

namespace detail {

void hermitian_eig(const Matrix& m, Eigen::VectorXd& values, Matrix& vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  }
  values = solver.eigenvalues();
  vectors = solver.eigenvectors();
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigenvalues: eigensolver failed to converge");
  }
  return solver.eigenvalues();
}

void thin_svd(const Matrix& m, Eigen::VectorXd& singular_values, Matrix& u, Matrix& v) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  singular_values = svd.singularValues();
  u = svd.matrixU();
  v = svd.matrixV();
}

Matrix cut_matrix(const Ket& psi) {
  const long da = psi.dims.dim_a();
  const long db = psi.dims.dim_b();
  Matrix m(da, db);
  for (long ia = 0; ia < da; ++ia)
    for (long ib = 0; ib < db; ++ib) m(ia, ib) = psi.amps(ia * db + ib);
  return m;
}

}  // namespace detail

Spectrum spectral(const Operator& op) {
  if (!op.hermitian) throw std::invalid_argument("spectral: operator is not marked hermitian");
  Eigen::VectorXd values;
  Matrix vectors;
  detail::hermitian_eig(op.mat, values, vectors);

  Spectrum sp;
  const long n = values.size();
  sp.eigenvalues.resize(n);
  sp.eigenvectors.reserve(n);
  const HilbertDims vec_dims = op.dims;
  for (long i = 0; i < n; ++i) {
    sp.eigenvalues[i] = values(n - 1 - i);  // non-increasing
    sp.eigenvectors.emplace_back(vectors.col(n - 1 - i).eval(), vec_dims);
  }
  return sp;
}

SchmidtForm schmidt(const Ket& psi) {
  if (!psi.dims.has_cut()) throw std::invalid_argument("schmidt: ket has no bipartite cut");
  Eigen::VectorXd sv;
  Matrix u, v;
  detail::thin_svd(detail::cut_matrix(psi), sv, u, v);

  SchmidtForm out;
  const long k = sv.size();
  const HilbertDims dims_a = make_dims(psi.dims.locals_a());
  const HilbertDims dims_b = make_dims(psi.dims.locals_b());
  out.coefficients.resize(k);
  out.left_vectors.reserve(k);
  out.right_vectors.reserve(k);
  for (long i = 0; i < k; ++i) {
    out.coefficients[i] = sv(i) * sv(i);
    out.left_vectors.emplace_back(u.col(i).eval(), dims_a);
    // m = U S V^dagger, so the B-side Schmidt vector carries conj(V col).
    out.right_vectors.emplace_back(v.col(i).conjugate().eval(), dims_b);
  }
  return out;
}

}  // namespace edgecert
