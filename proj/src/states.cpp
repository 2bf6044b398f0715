#include "edgecert/states.hpp"

#include <cmath>
#include <sstream>

#include "edgecert/tensor.hpp"

namespace edgecert {

ProductBasis::ProductBasis(std::vector<Ket> v, const Tolerances& tol) : vectors(std::move(v)) {
  if (vectors.empty()) throw std::invalid_argument("ProductBasis: empty vector list");
  dims = vectors.front().dims;
  if (!dims.has_cut()) throw std::invalid_argument("ProductBasis: members need a bipartite cut");
  for (const Ket& k : vectors) {
    if (!(k.dims == dims)) throw std::invalid_argument("ProductBasis: mixed dimensions");
  }
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      const double ov = std::abs(vectors[i].amps.dot(vectors[j].amps));
      if (ov > tol.construction) {
        std::ostringstream os;
        os << "ProductBasis: members " << i << "," << j << " overlap by " << ov;
        throw std::invalid_argument(os.str());
      }
    }
  }
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const SchmidtForm sf = schmidt(vectors[i]);
    if (std::abs(sf.coefficients.front() - 1.0) > tol.construction) {
      std::ostringstream os;
      os << "ProductBasis: member " << i << " is not a product vector (lambda1 = "
         << sf.coefficients.front() << ")";
      throw std::invalid_argument(os.str());
    }
  }
}

EdgeStateRecipe make_edge_recipe(ProductBasis basis) {
  const int d = basis.dims.ambient();
  const int n = static_cast<int>(basis.vectors.size());
  return EdgeStateRecipe{std::move(basis), d, d - n};
}

Ket epr() {
  Vector amps = Vector::Zero(4);
  amps(0) = amps(3) = 1.0 / std::sqrt(2.0);
  return Ket(std::move(amps), make_dims({2, 2}, 1));
}

Ket ghz() {
  Vector amps = Vector::Zero(8);
  amps(0) = amps(7) = 1.0 / std::sqrt(2.0);
  return Ket(std::move(amps), make_dims({2, 2, 2}, 1));
}

namespace {

Vector basis3(int i) {
  Vector v = Vector::Zero(3);
  v(i) = 1.0;
  return v;
}

Ket product_ket(const Vector& a, const Vector& b) {
  Vector amps(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) amps(i * 3 + j) = a(i) * b(j);
  return Ket(std::move(amps), make_dims({3, 3}, 1));
}

}  // namespace

ProductBasis tiles_upb() {
  const double s2 = 1.0 / std::sqrt(2.0);
  const double s3 = 1.0 / std::sqrt(3.0);
  const Vector e0 = basis3(0), e1 = basis3(1), e2 = basis3(2);
  const Vector m01 = s2 * (e0 - e1);   // (|0> - |1>)/sqrt2
  const Vector m12 = s2 * (e1 - e2);
  const Vector sum = s3 * (e0 + e1 + e2);

  std::vector<Ket> v;
  v.push_back(product_ket(e0, m01));
  v.push_back(product_ket(e2, m12));
  v.push_back(product_ket(m01, e2));
  v.push_back(product_ket(m12, e0));
  v.push_back(product_ket(sum, sum));
  return ProductBasis(std::move(v));
}

Operator edge_state(const EdgeStateRecipe& recipe) {
  if (recipe.rank <= 0) {
    throw std::invalid_argument("edge_state: basis spans the full space, complement has rank 0");
  }
  const int d = recipe.ambient_dim;
  Matrix p = Matrix::Zero(d, d);
  for (const Ket& k : recipe.basis.vectors) p += k.amps * k.amps.adjoint();
  Matrix delta = (Matrix::Identity(d, d) - p) / static_cast<double>(recipe.rank);
  return Operator(std::move(delta), recipe.basis.dims, true);
}

Ket purify(const Operator& rho) {
  require_density_shape(rho, "purify");
  const Spectrum sp = spectral(rho);
  const Tolerances& tol = default_tolerances();
  if (sp.eigenvalues.back() < tol.psd_floor) {
    std::ostringstream os;
    os << "purify: input is not positive semidefinite (min eigenvalue "
       << sp.eigenvalues.back() << ")";
    throw std::invalid_argument(os.str());
  }
  int rank = 0;
  while (rank < static_cast<int>(sp.eigenvalues.size()) &&
         sp.eigenvalues[rank] > tol.rank_cutoff) {
    ++rank;
  }
  if (rank == 0) throw std::invalid_argument("purify: input has numerical rank 0");

  const long d = rho.dims.ambient();
  Vector amps = Vector::Zero(d * rank);
  for (int k = 0; k < rank; ++k) {
    const double w = std::sqrt(sp.eigenvalues[k]);
    for (long i = 0; i < d; ++i) amps(i * rank + k) = w * sp.eigenvectors[k].amps(i);
  }
  std::vector<int> locals = rho.dims.locals;
  locals.push_back(rank);
  const int cut = static_cast<int>(rho.dims.locals.size());  // AB | purifier
  // sqrt of eigenvalues can leave the norm 1e-13ish off; renormalize.
  amps /= amps.norm();
  return Ket(std::move(amps), make_dims(std::move(locals), cut));
}

std::vector<std::string> state_registry_names() {
  return {"epr", "ghz", "ghz-marginal", "tiles-delta", "tiles-purification"};
}

StateRecord make_named_state(const std::string& name) {
  if (name == "epr") return epr();
  if (name == "ghz") return ghz();
  if (name == "ghz-marginal") {
    const Ket g = ghz();
    const Operator proj(Matrix(g.amps * g.amps.adjoint()), g.dims, true);
    return partial_trace(proj, {0, 1});
  }
  if (name == "tiles-delta") return edge_state(make_edge_recipe(tiles_upb()));
  if (name == "tiles-purification") {
    return purify(edge_state(make_edge_recipe(tiles_upb())));
  }
  throw std::invalid_argument("unknown state '" + name + "'; known states: epr, ghz, " +
                              "ghz-marginal, tiles-delta, tiles-purification");
}

}  // namespace edgecert
