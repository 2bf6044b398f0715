#include "edgecert/selfcheck.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "edgecert/certifier.hpp"
#include "edgecert/entropy.hpp"
#include "edgecert/io.hpp"
#include "edgecert/overlap.hpp"
#include "edgecert/states.hpp"
#include "edgecert/tensor.hpp"

namespace edgecert {

namespace {

struct Check {
  const char* name;
  std::function<void()> body;  // throws on failure
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

Operator random_density(int da, int db, std::mt19937_64& eng) {
  std::normal_distribution<double> g;
  const int d = da * db;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(g(eng), g(eng));
  Matrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return Operator(std::move(rho), make_dims({da, db}, 1), true);
}

}  // namespace

int run_verify_suite(std::ostream& os, std::uint64_t seed) {
  const Operator delta = edge_state(make_edge_recipe(tiles_upb()));
  const Subspace support = support_projector(delta, default_tolerances().rank_cutoff);

  std::vector<Check> checks;

  checks.push_back({"tiles basis is orthonormal product set", [] {
    const ProductBasis tiles = tiles_upb();  // constructor re-validates
    expect(tiles.vectors.size() == 5, "tiles basis size");
  }});

  checks.push_back({"edge state is a rank-4 PPT density matrix", [&] {
    expect(std::abs(delta.mat.trace().real() - 1.0) <= 1e-12, "trace");
    const PptResult p = ppt_check(delta);
    expect(p.is_ppt, "partial transpose not PSD");
    expect(support.dim() == 4, "support rank");
  }});

  checks.push_back({"partial transpose is an involution", [&] {
    const Operator twice = partial_transpose(partial_transpose(delta, Side::B), Side::B);
    expect((twice.mat - delta.mat).cwiseAbs().maxCoeff() == 0.0, "not exact");
  }});

  checks.push_back({"schmidt coefficients match marginal spectrum", [&] {
    const Ket psi = purify(delta);
    const SchmidtForm sf = schmidt(psi);
    const Operator proj(Matrix(psi.amps * psi.amps.adjoint()), psi.dims, true);
    const Spectrum marg = spectral(partial_trace(proj, {0, 1}));
    for (std::size_t i = 0; i < sf.coefficients.size() && i < marg.eigenvalues.size(); ++i) {
      expect(std::abs(sf.coefficients[i] - marg.eigenvalues[i]) <= 1e-10, "mismatch");
    }
  }});

  checks.push_back({"purification round trip", [&] {
    const Ket psi = purify(delta);
    const Operator proj(Matrix(psi.amps * psi.amps.adjoint()), psi.dims, true);
    const Operator back = partial_trace(proj, {0, 1});
    expect((back.mat - delta.mat).cwiseAbs().maxCoeff() <= 1e-12, "marginal differs");
  }});

  checks.push_back({"seesaw and Schmidt-form maxima agree", [&] {
    SeesawOptions opts;
    opts.restarts = 40;
    opts.seed = seed;
    const double b1 = seesaw_overlap(support, opts).beta;
    const double b2 = max_schmidt_over_subspace(support, opts).beta;
    expect(std::abs(b1 - b2) <= 1e-6, "disagreement");
    expect(b1 <= 1.0 - 0.01, "support contains a near-product vector");
  }});

  checks.push_back({"seesaw is deterministic for a fixed seed", [&] {
    SeesawOptions opts;
    opts.restarts = 10;
    opts.seed = seed;
    const OverlapResult r1 = seesaw_overlap(support, opts);
    const OverlapResult r2 = seesaw_overlap(support, opts);
    expect(std::memcmp(&r1.beta, &r2.beta, sizeof(double)) == 0, "beta bits differ");
  }});

  checks.push_back({"separability ball constant solves the radius equation", [&] {
    const SeparabilityCertificate cert = separability_ball_c(support);
    expect(std::abs(cert.distance - cert.ball_radius) <= 1e-12, "distance != radius");
    const double expected = 9.0 / (std::sqrt(160.0) - 4.0);
    expect(std::abs(cert.c - expected) <= 1e-9, "closed form mismatch");
  }});

  checks.push_back({"alpha sits strictly between beta and 1", [&] {
    SeesawOptions opts;
    opts.restarts = 40;
    opts.seed = seed;
    const double beta = seesaw_overlap(support, opts).beta;
    const AlphaBound ab = alpha_bound(beta, separability_ball_c(support));
    expect(beta < ab.alpha && ab.alpha < 1.0, "ordering violated");
  }});

  checks.push_back({"relative entropy is positive and faithful", [&] {
    std::mt19937_64 eng(seed ^ 0x5eedf00dULL);
    for (int i = 0; i < 20; ++i) {
      const Operator rho = random_density(2, 2, eng);
      const Operator sigma = random_density(2, 2, eng);
      const RelEntropyValue s = relative_entropy(rho, sigma);
      expect(s.value >= -1e-8, "negative value");
      const RelEntropyValue same = relative_entropy(rho, rho);
      expect(std::abs(same.value) <= 1e-8, "S(rho||rho) != 0");
    }
  }});

  checks.push_back({"pinching never increases relative entropy", [&] {
    std::mt19937_64 eng(seed ^ 0xdeadbeefULL);
    for (int i = 0; i < 20; ++i) {
      const Operator sigma = random_density(3, 3, eng);
      const Operator rho_full = random_density(3, 3, eng);
      // restrict rho to the tiles-complement support
      const Matrix proj = support.projector();
      Matrix r = proj * rho_full.mat * proj;
      r /= r.trace().real();
      r = ((r + r.adjoint()) / 2.0).eval();
      const Operator rho(std::move(r), rho_full.dims, true);
      const double lhs = relative_entropy(rho, sigma).value;
      const Operator pinched_sigma = pinch(support, sigma);
      const double rhs = relative_entropy(rho, pinched_sigma).value;
      expect(lhs >= rhs - 1e-8, "data processing violated");
    }
  }});

  checks.push_back({"state file round trip is bit exact", [&] {
    std::ostringstream buf;
    write_state(buf, delta);
    std::istringstream in(buf.str());
    const StateRecord rec = read_state(in);
    const Operator& back = std::get<Operator>(rec);
    expect((back.mat - delta.mat).cwiseAbs().maxCoeff() == 0.0, "bits differ");
  }});

  checks.push_back({"negative control certifies nothing", [&] {
    CertifyConfig config;
    config.state_id = "ghz-marginal";
    config.seed = seed;
    config.restarts = 20;
    const IrreversibilityCertificate cert = run_certification(config);
    expect(!cert.certified, "separable state was certified");
    expect(cert.cross.product_vector_found, "product vector not detected");
  }});

  int failures = 0;
  for (const Check& c : checks) {
    try {
      c.body();
      os << "[PASS] " << c.name << "\n";
    } catch (const std::exception& e) {
      ++failures;
      os << "[FAIL] " << c.name << ": " << e.what() << "\n";
    }
  }
  os << (failures == 0 ? "all checks passed" : "some checks FAILED") << " ("
     << checks.size() - failures << "/" << checks.size() << ")\n";
  return failures;
}

}  // namespace edgecert
