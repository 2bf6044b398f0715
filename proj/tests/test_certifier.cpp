#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "edgecert/certifier.hpp"
#include "test_helpers.hpp"

using namespace edgecert;

namespace {

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

}  // namespace

TEST_CASE("conservation_x passes the rate through") {
  CHECK(conservation_x(0.0) == 0.0);
  CHECK(conservation_x(1.0) == 1.0);
  CHECK_THROWS_AS(conservation_x(-0.1), std::invalid_argument);
}

TEST_CASE("basic contradiction records the margin") {
  const BasicContradiction a = basic_contradiction(0.0, 0.3);
  CHECK(a.holds);
  CHECK(a.margin == doctest::Approx(0.3));
  CHECK(a.x_ppt == 0.0);

  const BasicContradiction b = basic_contradiction(0.0, 0.0);
  CHECK_FALSE(b.holds);

  const BasicContradiction c = basic_contradiction(0.0, 1.0);
  CHECK(c.holds);
  CHECK(c.margin == doctest::Approx(1.0));
}

TEST_CASE("extended contradiction arithmetic") {
  AlphaBound ab;
  ab.alpha1 = 0.3;
  ab.c = 1.0;
  ab.alpha = 0.5;
  const ExtendedContradiction e = extended_contradiction(ab, 1.0);
  CHECK(e.x2_ppt == 1.0);
  CHECK(e.x2_sep_lower == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(e.margin_per_copy == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e.holds);

  const ExtendedContradiction z = extended_contradiction(ab, 0.0);
  CHECK(z.x2_ppt == 0.0);
  CHECK(z.x2_sep_lower == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(z.holds);

  ab.alpha = 0.9855;  // the margin does not depend on x1
  const ExtendedContradiction w = extended_contradiction(ab, 2.0);
  CHECK(w.x2_ppt == 2.0);
  CHECK(w.margin_per_copy == doctest::Approx(-std::log2(0.9855)).epsilon(1e-12));
  CHECK(w.holds);

  CHECK_THROWS_AS(extended_contradiction(ab, -1.0), std::invalid_argument);
}

TEST_CASE("full certification on the tiles state") {
  CertifyConfig config;
  config.state_id = "tiles-delta";
  config.seed = 7;
  config.restarts = 60;
  const IrreversibilityCertificate cert = run_certification(config);

  CHECK(cert.certified);
  CHECK(cert.ppt.is_ppt);
  REQUIRE(cert.beta.has_value());
  CHECK(cert.beta->beta < 0.99);
  CHECK(cert.cross.schmidt_agrees);
  REQUIRE(cert.cross.brute_beta.has_value());
  CHECK(std::abs(*cert.cross.brute_beta - cert.beta->beta) < 1e-2);
  REQUIRE(cert.alpha.has_value());
  CHECK(cert.beta->beta < cert.alpha->alpha);
  CHECK(cert.alpha->alpha < 1.0);
  CHECK(cert.esep_lower > 0.0);
  REQUIRE(cert.esep_upper.has_value());
  CHECK(cert.esep_lower <= *cert.esep_upper + 1e-8);
  REQUIRE(cert.eppt.has_value());
  CHECK(*cert.eppt == 0.0);

  CHECK(cert.contradiction_basic.holds);
  CHECK(cert.contradiction_basic.x_ppt == 0.0);
  CHECK(cert.contradiction_basic.margin == doctest::Approx(cert.regularized_lower));
  CHECK(cert.contradiction_extended.holds);
  CHECK(cert.contradiction_extended.x2_ppt == cert.contradiction_extended.x1);
  CHECK(cert.contradiction_extended.x2_sep_lower > cert.contradiction_extended.x1);

  // PPT branch bookkeeping is exact
  CHECK(cert.ledger_ppt.x1.value == cert.ledger_ppt.x2.value);
  CHECK(cert.ledger_ppt.x1.kind == RateKind::Exact);
  CHECK(cert.ledger_ppt.x.value == 0.0);
  CHECK(cert.ledger_sep.x.kind == RateKind::LowerBound);
  CHECK(cert.ledger_sep.x2.value > cert.ledger_sep.x1.value);
  CHECK(cert.ledger_sep.g.kind == RateKind::Unconstrained);

  CHECK_NOTHROW(validate_certificate(cert));
}

TEST_CASE("tensor-power experiments obey the alpha chain") {
  CertifyConfig config;
  config.state_id = "tiles-delta";
  config.seed = 7;
  config.restarts = 40;
  config.n_max = 2;
  config.m_list = {0, 1};
  const IrreversibilityCertificate cert = run_certification(config);

  REQUIRE(cert.experiments.size() == 4);
  const double beta = cert.beta->beta;
  const double alpha = cert.alpha->alpha;
  for (const ExperimentRow& row : cert.experiments) {
    CHECK(row.bound == combined_bound(row.n_copies, row.m_epr, *cert.alpha));
    CHECK(row.bound > static_cast<double>(row.m_epr));
    CHECK(row.beta_est <= row.alpha_chain + 1e-8);
    CHECK(-std::log2(row.beta_est) >= row.bound - 1e-8);
    const double witness = std::pow(beta, row.n_copies) / std::pow(2.0, row.m_epr);
    CHECK(row.beta_est >= witness - 1e-8);
    CHECK(row.alpha_chain ==
          doctest::Approx(std::pow(alpha, row.n_copies) / std::pow(2.0, row.m_epr)));
  }

  // the EPR attachment halves the composite overlap row by row
  const ExperimentRow& n1m0 = cert.experiments[0];
  const ExperimentRow& n1m1 = cert.experiments[1];
  CHECK(n1m1.beta_est == doctest::Approx(n1m0.beta_est / 2.0).epsilon(1e-6));
}

TEST_CASE("negative control on the separable GHZ marginal") {
  CertifyConfig config;
  config.state_id = "ghz-marginal";
  config.seed = 11;
  config.restarts = 30;
  const IrreversibilityCertificate cert = run_certification(config);

  CHECK_FALSE(cert.certified);
  CHECK(cert.cross.product_vector_found);
  CHECK(cert.beta->beta >= 1.0 - 1e-8);
  CHECK(cert.esep_lower == 0.0);
  CHECK(cert.regularized_lower == 0.0);
  CHECK_FALSE(cert.alpha.has_value());
  CHECK_FALSE(cert.contradiction_basic.holds);
  CHECK_FALSE(cert.contradiction_extended.holds);
  CHECK(cert.experiments.empty());
  CHECK_NOTHROW(validate_certificate(cert));
}

TEST_CASE("certification works from the purification") {
  CertifyConfig config;
  config.state_id = "tiles-purification";
  config.seed = 3;
  config.restarts = 40;
  const IrreversibilityCertificate cert = run_certification(config);
  CHECK(cert.certified);
  CHECK(cert.ppt.is_ppt);
}

TEST_CASE("bipartite pure states are rejected with a clear message") {
  CertifyConfig config;
  config.state_id = "epr";
  bool threw = false;
  try {
    run_certification(config);
  } catch (const std::invalid_argument& e) {
    threw = true;
    CHECK(std::string(e.what()).find("bipartite pure state") != std::string::npos);
    CHECK(std::string(e.what()).find("construct") != std::string::npos);  // stage name
  }
  CHECK(threw);
}

TEST_CASE("increasing restarts never weakens the evidence") {
  double prev = -1.0;
  for (int budget : {10, 50, 100}) {
    CertifyConfig config;
    config.state_id = "tiles-delta";
    config.seed = 5;
    config.restarts = budget;
    const IrreversibilityCertificate cert = run_certification(config);
    CHECK(cert.beta->beta >= prev - 1e-12);
    prev = cert.beta->beta;
  }
}

TEST_CASE("certificates are deterministic given the seed") {
  CertifyConfig config;
  config.state_id = "tiles-delta";
  config.seed = 7;
  config.restarts = 30;
  const std::string doc1 = certificate_to_text(run_certification(config));
  const std::string doc2 = certificate_to_text(run_certification(config));
  CHECK(strip_volatile(doc1) == strip_volatile(doc2));
  CHECK(doc1.find("\"schema_version\": 1") != std::string::npos);
}

TEST_CASE("n_max = 3 needs the explicit budget flag") {
  CertifyConfig config;
  config.state_id = "tiles-delta";
  config.n_max = 3;
  config.allow_n3 = false;
  CHECK_THROWS_AS(run_certification(config), std::invalid_argument);
}

TEST_CASE("experiments table has one row per (N, M)") {
  CertifyConfig config;
  config.state_id = "tiles-delta";
  config.seed = 7;
  config.restarts = 20;
  config.n_max = 2;
  config.m_list = {0, 1};
  const IrreversibilityCertificate cert = run_certification(config);
  const std::string table = experiments_to_table(cert);
  int rows = -1;  // discount the header
  for (char ch : table) {
    if (ch == '\n') ++rows;
  }
  CHECK(rows == 4);
  CHECK(table.rfind("n,m,beta_est,alpha_chain,bound,runtime_s", 0) == 0);
}
