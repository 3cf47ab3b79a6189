#include <set>

#include "test_util.hpp"

using namespace invlift;
using namespace testutil;

TEST_CASE("catalog enumerates the 17 configurations") {
  const auto& entries = catalog();
  REQUIRE(entries.size() == 17);
  std::vector<std::string> keys;
  for (const auto& e : entries) keys.push_back(e.config.key());
  CHECK(std::find(keys.begin(), keys.end(), "SE2/R2/point") != keys.end());
  CHECK(std::find(keys.begin(), keys.end(), "E3/R3/aff-stiefel") != keys.end());
  CHECK(catalog_entry(std::string("SE2/R2/point")).labels.size() == 4);
  CHECK(catalog_entry(std::string("E3/R3/aff-stiefel")).labels.size() == 7);
  try {
    catalog_entry(std::string("SE4/R4/point"));
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    // the message lists the valid keys
    CHECK(std::string(e.what()).find("E2/R2/point") != std::string::npos);
    CHECK(std::string(e.what()).find("SO3/S2/group") != std::string::npos);
  }
  SECTION("labels are unique within every entry") {
    for (const auto& e : entries) {
      std::set<std::string> unique(e.labels.begin(), e.labels.end());
      CHECK(unique.size() == e.labels.size());
    }
  }
  SECTION("stabilizer display matches the descriptor") {
    for (const auto& e : entries) {
      const auto desc = stabilizer_descriptor(e.config.pose_space());
      CHECK(e.stabilizer.rfind(desc.name(), 0) == 0);
    }
  }
}

TEST_CASE("catalog_eval dispatch examples") {
  SECTION("SE3 point latent gives the three squared distances") {
    const Configuration cfg = catalog_entry(std::string("SE3/R3/point")).config;
    check_features(catalog_eval(cfg, v3(1, 0, 0), v3(0, 1, 0), EuclPointPose{v3(0, 0, 0)}),
                   {2, 1, 1});
  }
  SECTION("coincident inputs give zero distances") {
    const Configuration cfg = catalog_entry(std::string("E2/R2/point")).config;
    check_features(catalog_eval(cfg, v2(1, 1), v2(1, 1), EuclPointPose{v2(1, 1)}), {0, 0, 0});
  }
  SECTION("SO3 sphere latent separates mirror configurations by the det entry") {
    const Configuration cfg = catalog_entry(std::string("SO3/S2/sphere")).config;
    const FeatureVector a =
        catalog_eval(cfg, v3(1, 0, 0), v3(0, 1, 0), SpherePose{UnitVec{v3(0, 0, 1)}});
    const FeatureVector b =
        catalog_eval(cfg, v3(1, 0, 0), v3(0, 1, 0), SpherePose{UnitVec{v3(0, 0, -1)}});
    for (int k = 0; k < 3; ++k) CHECK(a.values(k) == b.values(k));
    CHECK(a.values(3) == 1.0);
    CHECK(b.values(3) == -1.0);
  }
  SECTION("lifted pos-ori example in the plane") {
    const Configuration cfg = catalog_entry(std::string("E2/R2/pos-ori")).config;
    const Pose pose = PosOriPose{v2(0, 0), UnitVec{v2(0, 1)}};
    check_features(catalog_eval(cfg, v2(1, 0), v2(0, 1), pose), {0, 1, 1, 0, 1});
  }
  SECTION("group latent canonicalizes by the inverse element") {
    const Configuration cfg = catalog_entry(std::string("SE2/R2/group")).config;
    const GroupElement g(Family::SE, rot90(), v2(0, 0));
    const FeatureVector f = catalog_eval(cfg, v2(1, 1), v2(0, 0), GroupPose{g});
    check_close(Vec(f.values.head(2)), v2(1, -1), 1e-15);  // g^-1 . s
  }
}

TEST_CASE("lift collapses to the raw kernel at the base point") {
  Rng rng(31);
  for (const CatalogEntry& e : catalog()) {
    if (e.route == EvalRoute::Direct) continue;
    INFO("config " << e.config.key());
    const Pose base = base_point(e.config.pose_space());
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Vec s = sample_ambient_input(e.config, rng);
      const Vec r = sample_ambient_input(e.config, rng);
      worst = std::max(worst, max_abs_difference(catalog_eval(e.config, s, r, base),
                                                 catalog_eval_skipping_rho(e.config, s, r)));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("every catalog entry is invariant under the diagonal action") {
  for (const CatalogEntry& e : catalog()) {
    INFO("config " << e.config.key());
    CHECK(invariance_trial(e.config, 101, 300).max_deviation <= 1e-9);
  }
}

TEST_CASE("lifted outputs are independent of the canonicalization choice") {
  Rng rng(32);
  for (const CatalogEntry& e : catalog()) {
    if (e.route == EvalRoute::Direct) continue;
    INFO("config " << e.config.key());
    const PoseSpace space = e.config.pose_space();
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      const Vec s = sample_ambient_input(e.config, rng);
      const Vec r = sample_ambient_input(e.config, rng);
      const Pose p = sample_pose(space, rng);
      worst = std::max(worst,
                       max_abs_difference(
                           catalog_eval_with(e.config, s, r, canonicalize(space, p)),
                           catalog_eval_with(e.config, s, r, alternative_canonicalize(space, p, rng))));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("skipping canonicalization breaks invariance") {
  for (const CatalogEntry& e : catalog()) {
    if (e.route == EvalRoute::Direct) continue;
    INFO("config " << e.config.key());
    CHECK(invariance_trial(e.config, 102, 100, RhoMode::Skipped).max_deviation > 1e-3);
  }
}

TEST_CASE("group_latent matches the full-group catalog route") {
  Rng rng(33);
  SECTION("identity latent returns the kernel unchanged") {
    const LiftedInvariant li = group_latent(Family::SE, 2, AmbientKind::Euclidean,
                                            coordinate_kernel(2));
    const Pose id = GroupPose{GroupElement::identity(Family::SE, 2)};
    const FeatureVector f = li.eval({v2(1, 2), v2(3, 4)}, id);
    check_features(f, {1, 2, 3, 4});
  }
  SECTION("(x, g) and (h.x, h.g) agree for any h") {
    const Configuration cfg = catalog_entry(std::string("SE3/R3/group")).config;
    for (int i = 0; i < 200; ++i) {
      const Vec s = uniform_box_vec(3, 2.0, rng), r = uniform_box_vec(3, 2.0, rng);
      const GroupElement g = random_group_element(Family::SE, 3, rng);
      const GroupElement h = random_group_element(Family::SE, 3, rng);
      const FeatureVector a = catalog_eval(cfg, s, r, GroupPose{g});
      const FeatureVector b = catalog_eval(cfg, act_point(h, s), act_point(h, r),
                                           GroupPose{compose(h, g)});
      CHECK(max_abs_difference(a, b) <= 1e-10);
    }
  }
}

TEST_CASE("cross-reduction routes agree") {
  const PointKernel probe = cross_reduction_probe_kernel();
  SECTION("trivial instance: p at the origin, q the identity") {
    const std::vector<Vec> xs{v2(1, 0), v2(0, 1)};
    const auto result = cross_reduction_check(Family::SE, 2, xs, v2(0, 0),
                                              GroupElement::identity(Family::SE, 2), probe);
    CHECK(result.disagreement() <= 1e-14);
    check_close(result.via_group_latent.values, probe(xs, v2(0, 0)).values, 0.0);
  }
  SECTION("random SE(2) and SE(3) instances") {
    Rng rng(34);
    for (int dim : {2, 3}) {
      double worst = 0.0;
      for (int i = 0; i < 500; ++i) {
        const std::vector<Vec> xs{uniform_box_vec(dim, 2.0, rng), uniform_box_vec(dim, 2.0, rng)};
        const Vec p = uniform_box_vec(dim, 2.0, rng);
        const GroupElement q = random_group_element(Family::SE, dim, rng);
        worst = std::max(worst,
                         cross_reduction_check(Family::SE, dim, xs, p, q, probe).disagreement());
      }
      CHECK(worst <= 1e-9);
    }
  }
  SECTION("both routes are invariant under a common group element") {
    Rng rng(35);
    for (int i = 0; i < 200; ++i) {
      const std::vector<Vec> xs{uniform_box_vec(2, 2.0, rng), uniform_box_vec(2, 2.0, rng)};
      const Vec p = uniform_box_vec(2, 2.0, rng);
      const GroupElement q = random_group_element(Family::SE, 2, rng);
      const GroupElement g = random_group_element(Family::SE, 2, rng);
      const auto base = cross_reduction_check(Family::SE, 2, xs, p, q, probe);
      const std::vector<Vec> gxs{act_point(g, xs[0]), act_point(g, xs[1])};
      const auto moved =
          cross_reduction_check(Family::SE, 2, gxs, act_point(g, p), compose(g, q), probe);
      CHECK(max_abs_difference(base.via_point_latent, moved.via_point_latent) <= 1e-9);
      CHECK(max_abs_difference(base.via_group_latent, moved.via_group_latent) <= 1e-9);
    }
  }
}

TEST_CASE("iterated chain reduces every valid flag to (0, e1, e2)") {
  SECTION("already canonical") {
    const ChainResidue res =
        iterated_chain_SE3(v3(0, 0, 0), UnitVec{v3(1, 0, 0)}, UnitVec{v3(0, 1, 0)});
    CHECK(res.deviation() <= 1e-15);
  }
  SECTION("a quarter-turn in the (2,3)-plane finishes the job") {
    const ChainResidue res =
        iterated_chain_SE3(v3(4, -2, 7), UnitVec{v3(1, 0, 0)}, UnitVec{v3(0, 0, 1)});
    CHECK(res.deviation() <= 1e-15);
  }
  SECTION("1000 random flags") {
    Rng rng(36);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto [x, d, c] = sample_chain_flag(rng);
      worst = std::max(worst, iterated_chain_SE3(x, d, c).deviation());
    }
    CHECK(worst <= 1e-9);
  }
  SECTION("non-orthogonal flag rejected") {
    CHECK_THROWS_AS(
        iterated_chain_SE3(v3(0, 0, 0), UnitVec{v3(1, 0, 0)}, UnitVec{v3(1, 0, 0)}),
        ValidationError);
  }
}

TEST_CASE("catalog input validation") {
  const Configuration sphere_cfg = catalog_entry(std::string("SO3/S2/sphere")).config;
  CHECK_THROWS_AS(
      catalog_eval(sphere_cfg, v3(1.5, 0, 0), v3(0, 1, 0), SpherePose{UnitVec{v3(0, 0, 1)}}),
      ValidationError);
  const Configuration plane_cfg = catalog_entry(std::string("E2/R2/point")).config;
  CHECK_THROWS_AS(catalog_eval(plane_cfg, v3(1, 0, 0), v2(0, 1), EuclPointPose{v2(0, 0)}),
                  ValidationError);
  CHECK_THROWS_AS(catalog_eval(plane_cfg, v2(1, 0), v2(0, 1), SpherePose{UnitVec{v3(1, 0, 0)}}),
                  ValidationError);
}
