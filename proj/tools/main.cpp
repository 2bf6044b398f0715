// Command-line front end: state construction, overlap computation, bound
// evaluation, full certification and the invariant suite. All randomness
// flows from one root seed (mt19937_64 with fixed per-restart streams), so
// a given command line reproduces its report byte-for-byte apart from the
// timing fields.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgecert/certifier.hpp"
#include "edgecert/io.hpp"
#include "edgecert/selfcheck.hpp"
#include "edgecert/version.hpp"

namespace {

// documented exit codes (see README)
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitConstruction = 3;
constexpr int kExitUnconverged = 4;
constexpr int kExitNotCertified = 5;
constexpr int kExitIo = 6;

struct RunConfig {
  std::string command;
  std::string state_id = "tiles-delta";
  std::uint64_t seed = 0;
  int restarts = 100;
  double tol = 1e-10;
  int max_iter = 500;
  int n_max = 1;
  std::vector<int> m_list = {0};
  int brute_resolution = 4;
  std::string output_path;
  std::string format = "text";
};

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::ios_base::failure("cannot open for writing: " + path);
  os << text;
  if (!os) throw std::ios_base::failure("write failed: " + path);
}

edgecert::CertifyConfig to_certify_config(const RunConfig& cfg) {
  edgecert::CertifyConfig out;
  out.state_id = cfg.state_id;
  out.seed = cfg.seed;
  out.restarts = cfg.restarts;
  out.tol = cfg.tol;
  out.max_iter = cfg.max_iter;
  out.n_max = cfg.n_max;
  out.m_list = cfg.m_list;
  out.brute_resolution = cfg.brute_resolution;
  out.allow_n3 = cfg.n_max == 3;
  return out;
}

int cmd_state(const RunConfig& cfg) {
  const edgecert::StateRecord record = edgecert::make_named_state(cfg.state_id);
  const std::string path = cfg.output_path.empty() ? cfg.state_id + ".emv" : cfg.output_path;
  edgecert::write_state_file(path, record);
  std::cout << "wrote " << path << "\n";
  return kExitOk;
}

int cmd_overlap(const RunConfig& cfg) {
  using namespace edgecert;
  const StateRecord record = make_named_state(cfg.state_id);
  if (!std::holds_alternative<Operator>(record)) {
    throw std::invalid_argument("overlap needs a density-matrix state (try tiles-delta or "
                                "ghz-marginal)");
  }
  const Operator rho = std::get<Operator>(record);
  const Subspace support = support_projector(rho, default_tolerances().rank_cutoff);

  SeesawOptions opts;
  opts.restarts = cfg.restarts;
  opts.tol = cfg.tol;
  opts.max_iter = cfg.max_iter;
  opts.seed = cfg.seed;
  const OverlapResult res = seesaw_overlap(support, opts);

  std::ostringstream os;
  os << "state: " << cfg.state_id << "\n"
     << "support_dim: " << support.dim() << "\n"
     << "beta: " << std::setprecision(17) << res.beta << "\n"
     << "esep_lower_bound: " << esep_lower_bound(res.beta) << "\n"
     << "restarts: " << res.restarts << "\n"
     << "converged: " << (res.converged ? "true" : "false") << "\n"
     << "seed: " << res.seed << "\n";
  const std::string path = cfg.output_path.empty() ? "overlap-report.txt" : cfg.output_path;
  write_text_file(path, os.str());
  std::cout << os.str();
  if (!res.converged) {
    std::cerr << "error: seesaw did not converge within max_iter on every restart\n";
    return kExitUnconverged;
  }
  return kExitOk;
}

int cmd_bound(const RunConfig& cfg) {
  using namespace edgecert;
  CertifyConfig cc = to_certify_config(cfg);
  const IrreversibilityCertificate cert = run_certification(cc);
  const std::string path = cfg.output_path.empty() ? "bounds.csv" : cfg.output_path;
  write_text_file(path, experiments_to_table(cert));
  std::cout << experiments_to_table(cert);
  if (!cert.alpha) {
    std::cerr << "error: no alpha chain (support contains a product vector)\n";
    return kExitNotCertified;
  }
  return kExitOk;
}

int cmd_certify(const RunConfig& cfg) {
  using namespace edgecert;
  CertifyConfig cc = to_certify_config(cfg);
  const IrreversibilityCertificate cert = run_certification(cc);
  const std::string path = cfg.output_path.empty() ? "certificate.json" : cfg.output_path;
  write_text_file(path, certificate_to_text(cert));
  if (cfg.format == "tabular") {
    write_text_file(path + ".csv", experiments_to_table(cert));
  }
  std::cout << "certificate written to " << path << "\n";
  std::cout << "beta = " << std::setprecision(17) << cert.beta->beta
            << ", regularized lower bound = " << cert.regularized_lower << "\n";
  if (!cert.certified) {
    std::cerr << "error: certification failed (no contradiction established"
              << (cert.cross.product_vector_found ? "; support contains a product vector" : "")
              << ")\n";
    return kExitNotCertified;
  }
  std::cout << "certified: 0 = x > 0 with margin " << cert.contradiction_basic.margin
            << "; x1 = x2 vs x2 >= x1 + " << cert.contradiction_extended.margin_per_copy << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  const int failures = edgecert::run_verify_suite(std::cout, cfg.seed);
  return failures == 0 ? kExitOk : kExitNotCertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical irreversibility certificates for bound-entangled edge states"};
  app.set_version_flag("--version", std::string(edgecert::kToolName) + " " +
                                        edgecert::kToolVersion);
  app.require_subcommand(1);

  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub, bool with_search) {
    sub->add_option("--state", cfg.state_id, "named state (see `state --list`)");
    sub->add_option("--seed", cfg.seed, "root seed for all randomness");
    sub->add_option("--out", cfg.output_path, "report output path");
    if (with_search) {
      sub->add_option("--restarts", cfg.restarts, "seesaw restarts")
          ->check(CLI::Range(1, 100000));
      sub->add_option("--tol", cfg.tol, "seesaw convergence tolerance")
          ->check(CLI::PositiveNumber);
      sub->add_option("--max-iter", cfg.max_iter, "seesaw iteration cap")
          ->check(CLI::Range(1, 1000000));
    }
  };

  CLI::App* state = app.add_subcommand("state", "emit a named state to file");
  bool list_states = false;
  add_common(state, false);
  state->add_flag("--list", list_states, "list known state names");

  CLI::App* overlap = app.add_subcommand("overlap", "beta for a state's support");
  add_common(overlap, true);

  CLI::App* bound = app.add_subcommand("bound", "alpha chain and combined bounds over (N, M)");
  add_common(bound, true);
  bound->add_option("--n-max", cfg.n_max, "tensor-power depth")->check(CLI::Range(1, 3));
  bound->add_option("--m-list", cfg.m_list, "EPR attachment counts")
      ->delimiter(',')
      ->check(CLI::Range(0, 8));

  CLI::App* certify = app.add_subcommand("certify", "full irreversibility certificate");
  add_common(certify, true);
  certify->add_option("--n-max", cfg.n_max, "tensor-power depth")->check(CLI::Range(1, 3));
  certify->add_option("--m-list", cfg.m_list, "EPR attachment counts")
      ->delimiter(',')
      ->check(CLI::Range(0, 8));
  certify->add_option("--brute-resolution", cfg.brute_resolution,
                      "polar grid points per angle for the brute-force cross-check")
      ->check(CLI::Range(2, 64));
  certify->add_option("--format", cfg.format, "text | tabular (tabular adds a CSV)")
      ->check(CLI::IsMember({"text", "tabular"}));

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--seed", cfg.seed, "root seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (state->parsed()) {
      if (list_states) {
        for (const auto& name : edgecert::state_registry_names()) std::cout << name << "\n";
        return kExitOk;
      }
      return cmd_state(cfg);
    }
    if (overlap->parsed()) return cmd_overlap(cfg);
    if (bound->parsed()) return cmd_bound(cfg);
    if (certify->parsed()) return cmd_certify(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "construction error: " << e.what() << "\n";
    return kExitConstruction;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
