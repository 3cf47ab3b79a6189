#include "test_util.hpp"

using namespace invlift;
using namespace testutil;

namespace {

Json run(const std::string& suite, const std::string& config, int trials, bool& pass,
         std::optional<double> tol = std::nullopt) {
  VerifyOptions opt;
  opt.suite = suite;
  opt.config_key = config;
  opt.seed = 3;
  opt.trials = trials;
  opt.tolerance = tol;
  return run_verify(opt, pass);
}

}  // namespace

TEST_CASE("verify suite reports") {
  bool pass = false;
  SECTION("invariance over the full catalog") {
    const Json rep = run("invariance", "all", 50, pass);
    CHECK(pass);
    CHECK(rep.at("pass") == true);
    CHECK(rep.at("results").size() == 17);
    CHECK(rep.at("failures").empty());
    for (const auto& r : rep.at("results")) CHECK(r.at("max_deviation").get<double>() <= 1e-9);
  }
  SECTION("separation tabulates the three populations") {
    const Json rep = run("separation", "O3/S2/stiefel", 40, pass);
    CHECK(pass);
    const auto& r = rep.at("results")[0];
    CHECK(r.at("orbit_equal").at("oracle_same").get<int>() == 40);
    CHECK(r.at("independent").at("invariants_equal").get<int>() == 0);
    CHECK(r.at("false_merges").get<int>() == 0);
    CHECK(r.at("false_splits").get<int>() == 0);
  }
  SECTION("canonicalizer reports rho-independence only for lifted entries") {
    const Json direct = run("canonicalizer", "E2/R2/point", 40, pass);
    CHECK(pass);
    CHECK_FALSE(direct.at("results")[0].contains("max_rho_independence_deviation"));
    const Json lifted = run("canonicalizer", "E2/R2/pos-ori", 40, pass);
    CHECK(pass);
    CHECK(lifted.at("results")[0].at("max_rho_independence_deviation").get<double>() <= 1e-9);
  }
  SECTION("cross-reduction covers SE2 and SE3") {
    const Json rep = run("cross-reduction", "all", 50, pass);
    CHECK(pass);
    REQUIRE(rep.at("results").size() == 2);
    CHECK(rep.at("results")[0].at("family") == "SE2");
    CHECK(rep.at("results")[1].at("family") == "SE3");
  }
  SECTION("chain reports residue and witness data") {
    const Json rep = run("chain", "all", 60, pass);
    CHECK(pass);
    const auto& r = rep.at("results")[0];
    CHECK(r.at("max_residue").get<double>() <= 1e-9);
    CHECK(r.at("oracle_all_same_orbit") == true);
    CHECK(r.at("max_witness_residual").get<double>() <= 1e-7);
  }
  SECTION("impossible tolerance fails with details") {
    const Json rep = run("invariance", "E2/R2/pos-ori", 30, pass, 0.0);
    CHECK_FALSE(pass);
    CHECK(rep.at("pass") == false);
    REQUIRE(rep.at("failures").size() == 1);
    CHECK(rep.at("failures")[0].at("config") == "E2/R2/pos-ori");
    CHECK(rep.at("failures")[0].at("measured").get<double>() > 0.0);
  }
  SECTION("unknown suite is a usage error") {
    CHECK_THROWS_AS(run("nonsense", "all", 5, pass), UsageError);
  }
}

TEST_CASE("verify reports are reproducible for a fixed seed") {
  bool p1 = false, p2 = false;
  const Json a = run("separation", "SE2/R2/point", 30, p1);
  const Json b = run("separation", "SE2/R2/point", 30, p2);
  CHECK(a.dump() == b.dump());
  CHECK(p1 == p2);
}
