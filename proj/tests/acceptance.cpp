// Acceptance suite: one pass/fail line per criterion, each with its wall
// clock. Exits nonzero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "edgecert/certifier.hpp"
#include "edgecert/entropy.hpp"
#include "edgecert/io.hpp"
#include <unsupported/Eigen/KroneckerProduct>

#include "edgecert/overlap.hpp"
#include "edgecert/states.hpp"
#include "edgecert/tensor.hpp"
#include "test_helpers.hpp"

using namespace edgecert;

namespace {

struct Criterion {
  int number;
  std::string title;
  double time_limit_s;
  std::function<void()> body;  // throws on failure
};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

struct Fixture {
  Operator delta;
  Subspace support;
  OverlapResult beta;

  Fixture()
      : delta(edge_state(make_edge_recipe(tiles_upb()))),
        support(support_projector(delta, 1e-10)),
        beta(seesaw_overlap(support, [] {
          SeesawOptions o;
          o.restarts = 100;
          o.seed = 7;
          return o;
        }())) {}
};

std::string run_cli(const std::string& args, int& exit_code) {
  const std::string out_path = "acceptance_cli.tmp";
  const std::string cmd = std::string(EDGECERT_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::remove(out_path.c_str());
  return buf.str();
}

std::string strip_volatile(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("created_utc") != std::string::npos) continue;
    if (line.find("elapsed_seconds") != std::string::npos) continue;
    out << line << "\n";
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main() {
  const Fixture fx;
  const double beta_t = fx.beta.beta;

  std::vector<Criterion> criteria;

  criteria.push_back({1, "PPT edge state: trace, rank, positive partial transpose", 1.0, [&] {
    const PptResult p = ppt_check(fx.delta);
    require(p.is_ppt && p.min_eigenvalue >= -1e-10, "partial transpose not PSD");
    require(std::abs(fx.delta.mat.trace().real() - 1.0) <= 1e-12, "trace deviates");
    require(fx.support.dim() == 4, "rank at cutoff 1e-10 is not 4");
  }});

  criteria.push_back({2, "no-product-vector gap with Schmidt and grid cross-checks", 60.0, [&] {
    require(fx.beta.converged, "seesaw did not converge");
    require(beta_t <= 1.0 - 0.01, "beta_T too close to 1");
    SeesawOptions opts;
    opts.restarts = 100;
    opts.seed = 7;
    const double schmidt_beta = max_schmidt_over_subspace(fx.support, opts).beta;
    require(std::abs(schmidt_beta - beta_t) <= 1e-6, "schmidt-form maximum disagrees");
    const double grid_beta = brute_force_overlap(fx.support, 4);
    require(std::abs(grid_beta - beta_t) <= 1e-2, "brute-force grid disagrees");
  }});

  criteria.push_back({3, "overlap lower bound positive and sandwiched", 60.0, [&] {
    const double lower = esep_lower_bound(beta_t);
    require(lower > 0.0, "lower bound not positive");
    const ProductBasis tiles = tiles_upb();
    Matrix mix = Matrix::Zero(9, 9);
    for (const Ket& k : tiles.vectors) mix += k.amps * k.amps.adjoint();
    mix /= 5.0;
    std::vector<Operator> candidates;
    for (double p : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0}) {
      Matrix blend = (1.0 - p) * mix + p * Matrix::Identity(9, 9) / 9.0;
      candidates.emplace_back(std::move(blend), make_dims({3, 3}, 1), true);
    }
    const double upper = esep_upper_bound(fx.delta, candidates);
    require(std::isfinite(upper), "upper bound infinite");
    require(upper >= lower - 1e-8, "sandwich inverted");
  }});

  criteria.push_back({4, "alpha chain: ball constant, ordering, two-copy power", 300.0, [&] {
    const SeparabilityCertificate cert = separability_ball_c(fx.support);
    const double closed_form = 9.0 / (std::sqrt(160.0) - 4.0);
    require(std::abs(cert.c - closed_form) <= 1e-9, "c misses the closed form");
    require(std::abs(cert.c - testutil::line_search_ball_c(9, 4)) <= 1e-9,
            "c misses the line-search oracle");

    const AlphaBound ab = alpha_bound(beta_t, cert);
    require(beta_t < ab.alpha && ab.alpha < 1.0, "alpha ordering violated");

    const Subspace two = tensor_power(fx.support, 2);
    SeesawOptions opts;
    opts.restarts = 100;
    opts.seed = 7;
    opts.warm_starts.emplace_back(
        Eigen::kroneckerProduct(fx.beta.maximizer_a.amps, fx.beta.maximizer_a.amps).eval(),
        Eigen::kroneckerProduct(fx.beta.maximizer_b.amps, fx.beta.maximizer_b.amps).eval());
    const double beta_two = seesaw_overlap(two, opts).beta;
    require(beta_two <= ab.alpha * ab.alpha, "two-copy overlap exceeds alpha^2");
    require(beta_two >= beta_t * beta_t - 1e-8, "supermultiplicativity witness lost");
  }});

  criteria.push_back({5, "overlap multiplicativity under pure attachments", 120.0, [&] {
    SeesawOptions opts;
    opts.restarts = 100;
    opts.seed = 7;
    const double with_epr = seesaw_overlap(attach_pure(fx.support, epr()), opts).beta;
    require(std::abs(with_epr - beta_t / 2.0) <= 1e-6, "EPR attachment does not halve beta");

    Vector amps = Vector::Zero(4);
    amps(0) = std::sqrt(0.8);
    amps(3) = std::sqrt(0.2);
    const Ket skewed(amps, make_dims({2, 2}, 1));
    const double with_skewed = seesaw_overlap(attach_pure(fx.support, skewed), opts).beta;
    require(std::abs(with_skewed - beta_t * 0.8) <= 1e-6, "0.8 attachment scaling violated");
  }});

  criteria.push_back({6, "combined bound over the (N, M) grid", 300.0, [&] {
    CertifyConfig config;
    config.state_id = "tiles-delta";
    config.seed = 7;
    config.restarts = 100;
    config.n_max = 2;
    config.m_list = {0, 1};
    const IrreversibilityCertificate cert = run_certification(config);
    require(cert.experiments.size() == 4, "expected 4 experiment rows");
    for (const ExperimentRow& row : cert.experiments) {
      require(row.bound == combined_bound(row.n_copies, row.m_epr, *cert.alpha),
              "bound is not the exact arithmetic value");
      require(row.bound > static_cast<double>(row.m_epr), "bound not strictly above M");
      require(-std::log2(row.beta_est) >= row.bound - 1e-8,
              "composite seesaw inconsistent with the bound");
    }
  }});

  criteria.push_back({7, "certification emits both contradictions; control certifies nothing",
                      300.0, [&] {
    CertifyConfig config;
    config.state_id = "tiles-delta";
    config.seed = 7;
    config.restarts = 100;
    const IrreversibilityCertificate cert = run_certification(config);
    require(cert.certified, "tiles certificate not established");
    require(cert.contradiction_basic.holds, "basic contradiction missing");
    require(cert.contradiction_basic.x_ppt == 0.0, "PPT law rate not zero");
    require(std::abs(cert.contradiction_basic.margin - cert.regularized_lower) <= 1e-12,
            "basic margin is not -log2(alpha)");
    require(cert.contradiction_extended.holds, "extended contradiction missing");
    require(cert.contradiction_extended.x2_ppt == cert.contradiction_extended.x1,
            "PPT branch must force x1 = x2");
    require(std::abs(cert.contradiction_extended.margin_per_copy - cert.regularized_lower) <=
                1e-12,
            "extended margin differs from -log2(alpha)");

    int code = 0;
    run_cli("certify --state ghz-marginal --restarts 30 --seed 11 --out acceptance_ghz.json",
            code);
    require(code == 5, "negative control must exit with the certification-failed code");
    const std::string doc = read_file("acceptance_ghz.json");
    require(doc.find("\"certified\": false") != std::string::npos,
            "control certificate claims success");
    std::remove("acceptance_ghz.json");
  }});

  criteria.push_back({8, "entropy kernel: positivity, data processing, proof chain", 120.0, [&] {
    std::mt19937_64 eng(2024);
    for (int rep = 0; rep < 100; ++rep) {
      const Operator rho = testutil::random_density(2, 2, eng);
      const Operator sigma = testutil::random_density(2, 2, eng);
      require(relative_entropy(rho, sigma).value >= -1e-8, "S < 0");
      require(std::abs(relative_entropy(rho, rho).value) <= 1e-8, "S(rho||rho) != 0");
    }
    const Matrix basis = fx.support.basis_matrix;
    for (int rep = 0; rep < 100; ++rep) {
      const Operator rho = testutil::random_density_in(basis, fx.support.dims, eng);
      const Operator sigma = testutil::random_separable(3, 3, 6, 0.05, eng);
      const double lhs = relative_entropy(rho, sigma).value;
      const double dpi = relative_entropy(pinch(fx.support, rho), pinch(fx.support, sigma)).value;
      require(lhs >= dpi - 1e-8, "data processing violated");
      const PinchDecomposition pd = pinch_decomposition(fx.support, sigma);
      const double chain = -std::log2(pd.t) + relative_entropy(rho, pd.sigma_prime).value;
      require(lhs >= chain - 1e-8, "pinching chain violated");
    }
  }});

  criteria.push_back({9, "seeded certificates are byte-identical modulo timestamps", 300.0, [&] {
    int code1 = 0, code2 = 0;
    run_cli("certify --state tiles-delta --seed 7 --restarts 60 --out acceptance_c1.json", code1);
    run_cli("certify --state tiles-delta --seed 7 --restarts 60 --out acceptance_c2.json", code2);
    require(code1 == 0 && code2 == 0, "certify runs failed");
    const std::string c1 = read_file("acceptance_c1.json");
    const std::string c2 = read_file("acceptance_c2.json");
    require(strip_volatile(c1) == strip_volatile(c2), "certificates differ beyond timestamps");
    require(c1.find("\"certified\": true") != std::string::npos, "certificate not established");
    std::remove("acceptance_c1.json");
    std::remove("acceptance_c2.json");
  }});

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (error.empty() && elapsed > c.time_limit_s) {
      std::ostringstream os;
      os << "time limit " << c.time_limit_s << " s exceeded";
      error = os.str();
    }
    if (error.empty()) {
      std::printf("[PASS] criterion %d: %s (%.2f s)\n", c.number, c.title.c_str(), elapsed);
    } else {
      ++failures;
      std::printf("[FAIL] criterion %d: %s (%.2f s): %s\n", c.number, c.title.c_str(), elapsed,
                  error.c_str());
    }
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
