#include "test_util.hpp"

using namespace invlift;
using namespace testutil;

namespace {

AugmentedCloud make_cloud(std::vector<Vec> pts) {
  AugmentedCloud c;
  for (size_t i = 0; i < pts.size(); ++i) c.labels.push_back("p" + std::to_string(i));
  c.points = std::move(pts);
  return c;
}

AugmentedCloud mirror_z(const AugmentedCloud& cloud) {
  AugmentedCloud out = cloud;
  for (Vec& p : out.points) p(p.size() - 1) *= -1.0;
  return out;
}

}  // namespace

TEST_CASE("augment encodes tuples as labelled clouds") {
  SECTION("point latent gives three points") {
    const Configuration cfg = catalog_entry(std::string("SE3/R3/point")).config;
    const AugmentedCloud c = augment(cfg, v3(1, 0, 0), v3(0, 1, 0), EuclPointPose{v3(0, 0, 0)});
    REQUIRE(c.size() == 3);
    CHECK(c.labels == std::vector<std::string>{"s", "r", "pose:p"});
  }
  SECTION("pos-ori latent gives four points") {
    const Configuration cfg = catalog_entry(std::string("E3/R3/pos-ori")).config;
    const AugmentedCloud c = augment(cfg, v3(1, 0, 0), v3(0, 1, 0),
                                     PosOriPose{v3(0, 0, 1), UnitVec{v3(0, 1, 0)}});
    REQUIRE(c.size() == 4);
    check_close(c.points[3], v3(0, 1, 1), 0.0);  // t + alpha
  }
  SECTION("group latent gives t and the translated frame columns") {
    const Configuration cfg = catalog_entry(std::string("SE2/R2/group")).config;
    const AugmentedCloud c =
        augment(cfg, v2(1, 0), v2(0, 1), GroupPose{GroupElement(Family::SE, rot90(), v2(1, 1))});
    REQUIRE(c.size() == 5);
    check_close(c.points[2], v2(1, 1), 0.0);
    check_close(c.points[3], v2(1, 2), 0.0);  // t + R e1
    check_close(c.points[4], v2(0, 1), 0.0);  // t + R e2
  }
  SECTION("anchors transform covariantly") {
    Rng rng(50);
    for (const CatalogEntry& e : catalog()) {
      INFO("config " << e.config.key());
      const Vec s = sample_ambient_input(e.config, rng);
      const Vec r = sample_ambient_input(e.config, rng);
      const Pose p = sample_pose(e.config.pose_space(), rng);
      const GroupElement g = random_group_element(e.config.family, e.config.dim, rng);
      const AugmentedCloud before = augment(e.config, s, r, p);
      const AugmentedCloud after = augment(e.config, act_ambient(e.config.ambient, g, s),
                                           act_ambient(e.config.ambient, g, r), act_pose(g, p));
      REQUIRE(before.size() == after.size());
      for (int i = 0; i < before.size(); ++i)
        CHECK(max_abs(act_point(g, before.points[i]) - after.points[i]) <= 1e-10);
    }
  }
}

TEST_CASE("same_orbit accepts constructed congruent pairs") {
  Rng rng(51);
  for (Family f : {Family::E, Family::SE, Family::O, Family::SO}) {
    INFO("family " << family_name(f));
    for (int i = 0; i < 1000; ++i) {
      const int n = (f == Family::O || f == Family::SO) ? 3 : 2 + (i % 2);
      std::vector<Vec> pts;
      const int count = 3 + (i % 3);
      for (int k = 0; k < count; ++k) pts.push_back(uniform_box_vec(n, 2.0, rng));
      const AugmentedCloud a = make_cloud(pts);
      const AugmentedCloud b = act_cloud(random_group_element(f, n, rng), a);
      const OrbitVerdict v = same_orbit(f, a, b);
      REQUIRE(v.same_orbit);
      REQUIRE(v.witness.has_value());
      CHECK(v.residual <= 1e-9);
    }
  }
}

TEST_CASE("mirror tetrahedron: E(3) yes, SE(3) no") {
  const AugmentedCloud tet =
      make_cloud({v3(0, 0, 0), v3(1, 0, 0), v3(0, 1, 0), v3(0.25, 0.25, 1)});
  const AugmentedCloud mirrored = mirror_z(tet);
  CHECK(same_orbit(Family::E, tet, mirrored).same_orbit);
  CHECK_FALSE(same_orbit(Family::SE, tet, mirrored).same_orbit);
}

TEST_CASE("coplanar triangle and its mirror share the SE(3) orbit") {
  const AugmentedCloud tri = make_cloud({v3(0.5, 0, 0.25), v3(1, 2, 0.25), v3(-1, 1, 0.25)});
  AugmentedCloud mirrored = tri;
  for (Vec& p : mirrored.points) p(2) = 0.5 - p(2);  // reflect across z = 0.25
  const OrbitVerdict v = same_orbit(Family::SE, tri, mirrored);
  REQUIRE(v.same_orbit);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->rotation.determinant() == Catch::Approx(1.0).margin(1e-12));
  CHECK(v.residual <= 1e-9);
}

TEST_CASE("find_witness recovers the aligning element") {
  SECTION("identical clouds give the identity") {
    const AugmentedCloud c = make_cloud({v2(1, 0), v2(0, 1), v2(1, 1)});
    const GroupElement w = find_witness(Family::SE, c, c);
    CHECK(element_distance(w, GroupElement::identity(Family::SE, 2)) <= 1e-12);
    CHECK(alignment_residual(w, c, c) <= 1e-12);
  }
  SECTION("full-rank clouds reproduce the generator on every point") {
    Rng rng(52);
    for (int i = 0; i < 500; ++i) {
      std::vector<Vec> pts;
      for (int k = 0; k < 4; ++k) pts.push_back(uniform_box_vec(3, 2.0, rng));
      const AugmentedCloud a = make_cloud(pts);
      const GroupElement g = random_group_element(Family::SE, 3, rng);
      const AugmentedCloud b = act_cloud(g, a);
      const GroupElement w = find_witness(Family::SE, a, b);
      for (int k = 0; k < a.size(); ++k)
        CHECK(max_abs(act_point(w, a.points[k]) - act_point(g, a.points[k])) <= 1e-8);
    }
  }
  SECTION("sphere families align about the origin") {
    Rng rng(53);
    for (int i = 0; i < 200; ++i) {
      std::vector<Vec> pts;
      for (int k = 0; k < 3; ++k) pts.push_back(UnitVec::normalized(gaussian_vec(3, rng)).coords());
      const AugmentedCloud a = make_cloud(pts);
      const GroupElement g = random_group_element(Family::SO, 3, rng);
      const AugmentedCloud b = act_cloud(g, a);
      const GroupElement w = find_witness(Family::SO, a, b);
      CHECK(max_abs(w.translation) == 0.0);
      CHECK(alignment_residual(w, a, b) <= 1e-8);
    }
  }
}

TEST_CASE("verdicts disagree only where orientation matters") {
  Rng rng(54);
  SECTION("planar mirror pairs under SE(2) vs E(2)") {
    for (int i = 0; i < 200; ++i) {
      std::vector<Vec> pts;
      for (int k = 0; k < 3; ++k) pts.push_back(uniform_box_vec(2, 2.0, rng));
      const AugmentedCloud a = make_cloud(pts);
      AugmentedCloud b = a;
      for (Vec& p : b.points) p(1) *= -1.0;
      CHECK(same_orbit(Family::E, a, b).same_orbit);
      // Generic planar triangles are full-rank in R^2, so the mirror is
      // SE(2)-distinct unless the points happen to be collinear.
      const OrbitVerdict v = same_orbit(Family::SE, a, b);
      const Mat m = detail::cloud_matrix(a, true);
      if (detail::span_rank(m) == 2) CHECK_FALSE(v.same_orbit);
    }
  }
  SECTION("label mismatch is a usage error") {
    AugmentedCloud a = make_cloud({v2(1, 0), v2(0, 1)});
    AugmentedCloud b = a;
    b.labels[1] = "other";
    CHECK_THROWS_AS(same_orbit(Family::E, a, b), UsageError);
  }
}

TEST_CASE("invariance_trial") {
  const Configuration cfg = catalog_entry(std::string("E2/R2/pos-ori")).config;
  CHECK(invariance_trial(cfg, 55, 500).max_deviation <= 1e-9);
  CHECK(invariance_trial(cfg, 55, 100, RhoMode::Skipped).max_deviation > 1e-3);
  CHECK_THROWS_AS(invariance_trial(cfg, 55, 0), UsageError);
}

TEST_CASE("separation_trial tabulates three populations") {
  const Configuration cfg = catalog_entry(std::string("SE2/R2/point")).config;
  const SeparationReport rep = separation_trial(cfg, 56, 200);
  CHECK(rep.orbit_equal.pairs == 200);
  CHECK(rep.orbit_equal.oracle_same == 200);
  CHECK(rep.orbit_equal.invariants_equal == 200);
  CHECK(rep.perturbed.false_merges == 0);
  CHECK(rep.false_merges() == 0);
  CHECK(rep.false_splits() == 0);
  CHECK(rep.agreements() == 600);
  CHECK_THROWS_AS(separation_trial(cfg, 56, 0), UsageError);
}

TEST_CASE("SE(2) point-latent mirror pairs split in the det entry") {
  const Configuration cfg = catalog_entry(std::string("SE2/R2/point")).config;
  const Vec s = v2(1, 0), r = v2(0, -1), p = v2(0, 0);
  const Vec sm = v2(1, 0), rm = v2(0, 1), pm = v2(0, 0);
  const FeatureVector a = catalog_eval(cfg, s, r, EuclPointPose{p});
  const FeatureVector b = catalog_eval(cfg, sm, rm, EuclPointPose{pm});
  for (int k = 0; k < 3; ++k) CHECK(a.values(k) == b.values(k));
  CHECK(a.values(3) == -b.values(3));
  const OrbitVerdict v = same_orbit(Family::SE, augment(cfg, s, r, EuclPointPose{p}),
                                    augment(cfg, sm, rm, EuclPointPose{pm}));
  CHECK_FALSE(v.same_orbit);
}
