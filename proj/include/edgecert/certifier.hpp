#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edgecert/entropy.hpp"
#include "edgecert/overlap.hpp"
#include "edgecert/states.hpp"

namespace edgecert {

/// Rates are exact where the conservation law fixes them, certified lower
/// bounds where they come from the alpha chain, and unconstrained where
/// the AB-cut argument does not touch them (g, y, z).
enum class RateKind { Exact, LowerBound, Unconstrained };

struct Rate {
  double value = 0.0;
  RateKind kind = RateKind::Unconstrained;
};

Rate exact_rate(double v);
Rate lower_bound_rate(double v);
Rate unconstrained_rate();

/// Rates of the reference transformation for one choice of the invariant
/// set: g GHZ, x/y/z pairwise EPR rates, x1/x2 the two-sided EPR rates.
struct ConservationLedger {
  SetChoice omega = SetChoice::PPT;
  Rate g, x, y, z;
  Rate x1, x2;
};

/// The PPT law forces x = 0 while the Sep law forces x >= margin > 0.
struct BasicContradiction {
  double x_ppt = 0.0;
  double x_sep_lower = 0.0;
  double margin = 0.0;
  bool holds = false;
};

/// The PPT law forces x2 = x1 exactly while the Sep law forces
/// x2 >= x1 + margin_per_copy with a strictly positive margin.
struct ExtendedContradiction {
  double x1 = 0.0;
  double x2_ppt = 0.0;
  double x2_sep_lower = 0.0;
  double margin_per_copy = 0.0;
  bool holds = false;
};

/// One (N, M) experiment: N subspace copies with M EPR pairs attached.
struct ExperimentRow {
  int n_copies = 1;
  int m_epr = 0;
  double beta_est = 0.0;     // seesaw on the composite subspace
  double alpha_chain = 0.0;  // alpha^N / 2^M
  double bound = 0.0;        // -N log2(alpha) + M
  double runtime_s = 0.0;
};

struct CertifyConfig {
  std::string state_id = "tiles-delta";
  std::uint64_t seed = 0;
  int restarts = 100;
  double tol = 1e-10;
  int max_iter = 500;
  int n_max = 1;  // 1 or 2; 3 only with allow_n3
  std::vector<int> m_list = {0};
  int brute_resolution = 4;
  double x1 = 1.0;  // EPR rate fed to the two-sided ledger
  bool allow_n3 = false;
};

struct CrossChecks {
  double schmidt_beta = 0.0;
  bool schmidt_agrees = false;
  std::optional<double> brute_beta;  // absent when local dims exceed 3
  int brute_resolution = 0;
  double brute_gap_bound = 0.0;
  bool product_vector_found = false;
};

struct IrreversibilityCertificate {
  int schema_version = 1;
  std::string tool_name;
  std::string tool_version;
  CertifyConfig config;
  PptResult ppt;
  std::optional<OverlapResult> beta;
  CrossChecks cross;
  std::optional<SeparabilityCertificate> cert_c;
  std::optional<AlphaBound> alpha;
  double esep_lower = 0.0;            // -log2(beta)
  std::optional<double> esep_upper;   // explicit-candidate upper bound
  std::optional<double> eppt;         // 0 for PPT input, absent otherwise
  double regularized_lower = 0.0;     // -log2(alpha)
  std::vector<ExperimentRow> experiments;
  ConservationLedger ledger_ppt;
  ConservationLedger ledger_sep;
  BasicContradiction contradiction_basic;
  ExtendedContradiction contradiction_extended;
  bool certified = false;
  std::string assumption;
  std::string created_utc;
  double elapsed_seconds = 0.0;
};

/// Conservation law applied to the reference transformation: the AB-side
/// regularized relative entropy of entanglement equals the EPR_AB rate.
double conservation_x(double ereg);

/// eppt comes from e_ppt_trivial, esep_lower from regularized_lower_bound.
BasicContradiction basic_contradiction(double eppt, double esep_lower);

ExtendedContradiction extended_contradiction(const AlphaBound& alpha, double x1);

/// Full pipeline: state construction, PPT check, support projector, seesaw
/// with Schmidt-form and brute-force cross-checks, separability ball,
/// alpha chain, sandwich bounds, tensor-power/attachment experiments,
/// ledgers, contradictions. Deterministic for a given seed. Any stage
/// failure throws with the stage name.
IrreversibilityCertificate run_certification(const CertifyConfig& config);

/// Recomputes every derived field from the stored inputs and throws
/// std::logic_error on any inconsistency. Called before emission.
void validate_certificate(const IrreversibilityCertificate& cert);

/// Structured key-value document (JSON) with a schema version field.
std::string certificate_to_text(const IrreversibilityCertificate& cert);

/// Flat table, one row per (N, M) experiment.
std::string experiments_to_table(const IrreversibilityCertificate& cert);

}  // namespace edgecert
