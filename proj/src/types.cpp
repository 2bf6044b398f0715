#include "edgecert/types.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace edgecert {

const Tolerances& default_tolerances() {
  static const Tolerances tol;
  return tol;
}

int HilbertDims::ambient() const {
  int d = 1;
  for (int l : locals) d *= l;
  return d;
}

int HilbertDims::dim_a() const {
  if (!has_cut()) throw std::invalid_argument("HilbertDims: no bipartite cut set");
  int d = 1;
  for (int i = 0; i < cut; ++i) d *= locals[i];
  return d;
}

int HilbertDims::dim_b() const {
  if (!has_cut()) throw std::invalid_argument("HilbertDims: no bipartite cut set");
  int d = 1;
  for (std::size_t i = cut; i < locals.size(); ++i) d *= locals[i];
  return d;
}

std::vector<int> HilbertDims::locals_a() const {
  if (!has_cut()) throw std::invalid_argument("HilbertDims: no bipartite cut set");
  return {locals.begin(), locals.begin() + cut};
}

std::vector<int> HilbertDims::locals_b() const {
  if (!has_cut()) throw std::invalid_argument("HilbertDims: no bipartite cut set");
  return {locals.begin() + cut, locals.end()};
}

HilbertDims make_dims(std::vector<int> locals, int cut) {
  if (locals.empty()) throw std::invalid_argument("HilbertDims: locals must be nonempty");
  for (int l : locals) {
    if (l < 1) throw std::invalid_argument("HilbertDims: every local dimension must be >= 1");
  }
  if (cut != 0 && (cut < 1 || cut >= static_cast<int>(locals.size()))) {
    std::ostringstream os;
    os << "HilbertDims: cut " << cut << " is not a valid split of " << locals.size() << " factors";
    throw std::invalid_argument(os.str());
  }
  HilbertDims d;
  d.locals = std::move(locals);
  d.cut = cut;
  return d;
}

Ket::Ket(Vector amplitudes, HilbertDims d, const Tolerances& tol)
    : amps(std::move(amplitudes)), dims(std::move(d)) {
  if (amps.size() != dims.ambient()) {
    std::ostringstream os;
    os << "Ket: amplitude length " << amps.size() << " does not match ambient dimension "
       << dims.ambient();
    throw std::invalid_argument(os.str());
  }
  const double norm = amps.norm();
  if (std::abs(norm - 1.0) > tol.construction) {
    std::ostringstream os;
    os << "Ket: norm " << norm << " deviates from 1 beyond tolerance";
    throw std::invalid_argument(os.str());
  }
}

Ket Ket::with_cut(int cut) const {
  return Ket(amps, make_dims(dims.locals, cut));
}

Operator::Operator(Matrix entries, HilbertDims d, bool hermitian_flag, const Tolerances& tol)
    : mat(std::move(entries)), dims(std::move(d)), hermitian(hermitian_flag) {
  if (mat.rows() != mat.cols()) throw std::invalid_argument("Operator: matrix must be square");
  if (mat.rows() != dims.ambient()) {
    std::ostringstream os;
    os << "Operator: side length " << mat.rows() << " does not match ambient dimension "
       << dims.ambient();
    throw std::invalid_argument(os.str());
  }
  if (hermitian) {
    const double dev = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol.construction) {
      std::ostringstream os;
      os << "Operator: marked hermitian but deviates by " << dev;
      throw std::invalid_argument(os.str());
    }
  }
}

Operator Operator::with_cut(int cut) const {
  return Operator(mat, make_dims(dims.locals, cut), hermitian);
}

void require_density_shape(const Operator& op, const std::string& role, const Tolerances& tol) {
  if (!op.hermitian) {
    throw std::invalid_argument(role + ": density matrix required (hermitian flag not set)");
  }
  const double tr = op.mat.trace().real();
  if (std::abs(tr - 1.0) > tol.construction) {
    std::ostringstream os;
    os << role << ": density matrix required (trace " << tr << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace edgecert
