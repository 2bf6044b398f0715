#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "edgecert/io.hpp"
#include "edgecert/states.hpp"
#include "test_helpers.hpp"

using namespace edgecert;

TEST_CASE("ket round trip is bit exact") {
  std::mt19937_64 eng(101);
  for (int rep = 0; rep < 20; ++rep) {
    const Ket psi(testutil::random_unit(6, eng), make_dims({2, 3}, 1));
    std::ostringstream buf;
    write_state(buf, psi);
    std::istringstream in(buf.str());
    const StateRecord rec = read_state(in);
    REQUIRE(std::holds_alternative<Ket>(rec));
    const Ket& back = std::get<Ket>(rec);
    CHECK(back.dims == psi.dims);
    for (long i = 0; i < psi.amps.size(); ++i) {
      CHECK(back.amps(i).real() == psi.amps(i).real());
      CHECK(back.amps(i).imag() == psi.amps(i).imag());
    }
  }
}

TEST_CASE("operator round trip is bit exact and restores hermitian flag") {
  std::mt19937_64 eng(102);
  const Operator rho = testutil::random_density(2, 2, eng);
  std::ostringstream buf;
  write_state(buf, rho);
  std::istringstream in(buf.str());
  const StateRecord rec = read_state(in);
  REQUIRE(std::holds_alternative<Operator>(rec));
  const Operator& back = std::get<Operator>(rec);
  CHECK(back.hermitian);
  CHECK(back.dims == rho.dims);
  CHECK((back.mat - rho.mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("registry states serialize") {
  for (const std::string& name : state_registry_names()) {
    const StateRecord rec = make_named_state(name);
    std::ostringstream buf;
    std::visit([&buf](const auto& s) { write_state(buf, s); }, rec);
    std::istringstream in(buf.str());
    CHECK_NOTHROW(read_state(in));
  }
  CHECK_THROWS_AS(make_named_state("no-such-state"), std::invalid_argument);
}

TEST_CASE("comments and blank lines are tolerated before fields") {
  std::istringstream in(
      "# comment\n"
      "\n"
      "locals: 2\n"
      "cut: 0\n"
      "kind: ket\n"
      "data:\n"
      "1 0\n"
      "0 0\n");
  const StateRecord rec = read_state(in);
  CHECK(std::holds_alternative<Ket>(rec));
}

TEST_CASE("malformed records are rejected") {
  {
    std::istringstream in("cut: 0\nlocals: 2\n");
    CHECK_THROWS_AS(read_state(in), std::runtime_error);
  }
  {
    std::istringstream in("locals: 2\ncut: 0\nkind: spam\ndata:\n1 0\n0 0\n");
    CHECK_THROWS_AS(read_state(in), std::runtime_error);
  }
  {
    std::istringstream in("locals: 2\ncut: 0\nkind: ket\ndata:\n1 0\n");
    CHECK_THROWS_AS(read_state(in), std::runtime_error);  // missing row
  }
  {
    std::istringstream in("locals: 2\ncut: 0\nkind: ket\ndata:\n1\n0 0\n");
    CHECK_THROWS_AS(read_state(in), std::runtime_error);  // malformed pair
  }
  {
    // norm violation surfaces as a construction error
    std::istringstream in("locals: 2\ncut: 0\nkind: ket\ndata:\n1 0\n1 0\n");
    CHECK_THROWS_AS(read_state(in), std::invalid_argument);
  }
}
