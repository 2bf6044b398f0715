#pragma once

#include <string>
#include <vector>

#include "edgecert/io.hpp"
#include "edgecert/types.hpp"

namespace edgecert {

/// Pairwise-orthogonal product vectors across a bipartite cut.
struct ProductBasis {
  std::vector<Ket> vectors;
  HilbertDims dims;

  ProductBasis(std::vector<Ket> v, const Tolerances& tol = default_tolerances());
};

/// Recipe for a bound-entangled edge state: the normalized projector onto
/// the orthogonal complement of a product basis.
struct EdgeStateRecipe {
  ProductBasis basis;
  int ambient_dim;  // D
  int rank;         // r = D - |basis|
};

EdgeStateRecipe make_edge_recipe(ProductBasis basis);

/// (|00> + |11>)/sqrt(2) on 2x2, cut after the first factor.
Ket epr();

/// (|000> + |111>)/sqrt(2) on 2x2x2, cut A|BC.
Ket ghz();

/// The five-member Tiles product basis in 3x3. Its complement contains no
/// product vector, so edge_state(tiles) is a bound-entangled edge state.
ProductBasis tiles_upb();

/// delta = (I - P_basis) / (D - n): density matrix supported on the
/// complement of the basis span. Throws when the basis spans everything.
Operator edge_state(const EdgeStateRecipe& recipe);

/// Purification sum_k sqrt(e_k) |w_k> x |k> with purifying factor of
/// dimension rank(rho); locals = rho.locals ++ [rank], cut = AB|C.
/// partial_trace over the purifier returns rho.
Ket purify(const Operator& rho);

/// Named constructors reachable from the CLI.
std::vector<std::string> state_registry_names();
StateRecord make_named_state(const std::string& name);

}  // namespace edgecert
