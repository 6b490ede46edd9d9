#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "mkp/fixtures.hpp"
#include "mkp/serialization.hpp"
#include "test_util.hpp"

using namespace mkp;

TEST_CASE("complex values travel as [re, im]") {
  json j = complex_to_json(Complex(0.25, -3.0));
  CHECK(j == json::array({0.25, -3.0}));
  CHECK(complex_from_json(j, "test") == Complex(0.25, -3.0));
  CHECK_THROWS_AS(complex_from_json(json{{"re", 1.0}}, "test"),
                  std::invalid_argument);
  CHECK_THROWS_AS(complex_from_json(json::array({1.0}), "test"),
                  std::invalid_argument);
}

TEST_CASE("MUB family JSON round trip preserves exact doubles") {
  for (int d : {3, 4}) {
    MubFamily fam = mub_family(d);
    MubFamily back = mub_from_json(mub_to_json(fam));
    REQUIRE(back.d == d);
    for (int mu = 0; mu <= d; ++mu)
      CHECK(back.basis(mu).matrix() == fam.basis(mu).matrix());
  }
  CHECK_THROWS_AS(mub_from_json(json{{"d", 3}}), std::invalid_argument);
}

TEST_CASE("vector set JSON round trip and diagnostics") {
  SplitMix64 rng(7);
  VectorSet vs = test_util::random_vector_set(4, 3, rng);
  VectorSet back = vector_set_from_json(vector_set_to_json(vs));
  REQUIRE(back.size() == 4);
  for (int i = 0; i < 4; ++i)
    CHECK(back.ket(i).vec() == vs.ket(i).vec());

  json bad = vector_set_to_json(vs);
  bad["vectors"][1][0] = json::array({2.0, 0.0});  // breaks the unit norm
  try {
    vector_set_from_json(bad);
    FAIL("expected a diagnostic");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("vector 2") != std::string::npos);
    CHECK(std::string(e.what()).find("norm") != std::string::npos);
  }
}

TEST_CASE("strategy JSON: pure input, builtin family, explicit decision") {
  CounterexampleFixture fix = counterexample_d4();
  Strategy strat{4, DensityOperator::pure(fix.phi), fix.chi, mub_family(4),
                 std::nullopt};
  json j = strategy_to_json(strat);
  CHECK(j["mub"] == "builtin");
  CHECK(j["rho"].contains("pure"));

  Strategy back = strategy_from_json(j);
  CHECK(back.d == 4);
  CHECK(back.chi.matrix() == fix.chi.matrix());
  CHECK_FALSE(back.decision.has_value());
  REQUIRE(back.rho.witness().has_value());
  CHECK(back.rho.witness()->vec() == fix.phi.vec());

  j["decision"] = json::array({{1, 1, 1, 1}, {2, 2, 2, 2}, {3, 3, 3, 3},
                               {4, 4, 4, 4}, {1, 2, 3, 4}});
  back = strategy_from_json(j);
  REQUIRE(back.decision.has_value());
  CHECK((*back.decision)(1, 1) == 1);  // 0-based internal view of guess "2"
  CHECK((*back.decision)(3, 4) == 3);
}

TEST_CASE("strategy JSON: matrix input and inline family") {
  MubFamily fam = mub_family(3);
  json j{{"d", 3},
         {"rho", {{"matrix", json::array()}}},
         {"chi", basis_to_json(Basis(fam.basis(1).matrix()))},
         {"mub", mub_to_json(fam)}};
  Matrix mixed = Matrix::Identity(3, 3) / 3.0;
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 3; ++c) row.push_back(complex_to_json(mixed(r, c)));
    j["rho"]["matrix"].push_back(row);
  }
  Strategy strat = strategy_from_json(j);
  CHECK(strat.rho.matrix() == mixed);
  CHECK_FALSE(strat.rho.witness().has_value());
  CHECK(strat.mubs.d == 3);
}

TEST_CASE("strategy JSON rejects bad input with precise diagnostics") {
  CounterexampleFixture fix = counterexample_d3();
  Strategy strat{3, DensityOperator::pure(fix.phi), fix.chi, mub_family(3),
                 std::nullopt};
  json good = strategy_to_json(strat);

  json bad_state = good;
  bad_state["rho"]["pure"][0] = json::array({0.3, 0.0});
  try {
    strategy_from_json(bad_state);
    FAIL("expected a diagnostic");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("norm") != std::string::npos);
  }

  json bad_chi = good;
  bad_chi["chi"][0] = bad_chi["chi"][1];  // duplicate column
  try {
    strategy_from_json(bad_chi);
    FAIL("expected a diagnostic");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("orthonormal") != std::string::npos);
  }

  json bad_decision = good;
  bad_decision["decision"] = json::array({{1, 1, 1}, {2, 2, 2}, {3, 3, 3},
                                          {1, 1, 4}});  // guess 4 in d=3
  CHECK_THROWS_AS(strategy_from_json(bad_decision), std::invalid_argument);

  json no_rho = good;
  no_rho.erase("rho");
  CHECK_THROWS_AS(strategy_from_json(no_rho), std::invalid_argument);
}

TEST_CASE("game report serialization uses 1-based j,k and 0-based mu") {
  MubFamily fam = mub_family(2);
  DensityOperator rho = DensityOperator::pure(fam.basis(0).ket(1));
  Basis chi(fam.basis(0).matrix());
  GameReport rep = success_probability(rho, chi, optimal_decision(rho, chi, fam), fam);

  json j = report_to_json(rep);
  REQUIRE(j["per_mu"].size() == 3);
  REQUIRE(j["decision"]["table"].size() == 3);   // mu = 0, 1, 2
  CHECK(j["decision"]["table"][0].size() == 2);  // k = 1..2
  // rho = |Psi^0_2>, chi = basis 0: k=2 picks guess "2"; the zero-scoring
  // k=1 cell ties down to guess "1"
  CHECK(j["decision"]["table"][0] == json::array({1, 2}));
  CHECK(j["total"] == rep.total);
}

TEST_CASE("theorem certificate and scan summary serialize every field") {
  MubFamily fam = mub_family(3);
  TheoremCertificate cert = certify_theorem(fam, haar_random_basis(3, 17));
  json cj = certificate_to_json(cert);
  for (const char* key : {"d", "p_value", "intermediate", "bound",
                          "per_k_norms", "slack_intermediate", "slack_bound"})
    CHECK(cj.contains(key));

  DensityOperator rho = DensityOperator::pure(fam.basis(0).ket(0));
  ScanResult res = scan(ScanConfig{3, 5, 1, 1}, rho, fam);
  json sj = summary_to_json(res.summary);
  CHECK(sj["measurement_distribution"] == "haar");
  CHECK(sj["trials"] == 5);
  CHECK(sj.contains("theorem_check"));
}
