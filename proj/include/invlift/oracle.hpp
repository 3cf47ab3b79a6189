#pragma once

#include <optional>
#include <vector>

#include "invlift/reduce.hpp"

namespace invlift {

/// Span singular values below this fraction of the largest count as zero.
inline constexpr double kSpanRankTol = 1e-8;
/// Witness alignment acceptance bound.
inline constexpr double kWitnessTol = 1e-7;

/// A catalog tuple flattened to a labelled point cloud in R^n. Tuples lie in
/// the same orbit exactly when their clouds are congruent under the group,
/// which reduces orbit membership to classical point-configuration rigidity
/// independent of every catalog formula.
struct AugmentedCloud {
  std::vector<Vec> points;
  std::vector<std::string> labels;
  int size() const { return static_cast<int>(points.size()); }
};

/// Encodes (s, r, pose) as a cloud: the two inputs plus pose anchors.
/// Direction components become offset points t + alpha so that every anchor
/// transforms covariantly under the group action.
inline AugmentedCloud augment(const Configuration& config, const Vec& s, const Vec& r,
                              const Pose& pose) {
  validate_ambient_input(config, s, "s");
  validate_ambient_input(config, r, "r");
  validate_pose(config.pose_space(), pose);
  AugmentedCloud cloud;
  cloud.points = {s, r};
  cloud.labels = {"s", "r"};
  auto push = [&cloud](const Vec& p, const std::string& label) {
    cloud.points.push_back(p);
    cloud.labels.push_back(label);
  };
  if (const auto* e = std::get_if<EuclPointPose>(&pose)) {
    push(e->point, "pose:p");
  } else if (const auto* e = std::get_if<PosOriPose>(&pose)) {
    push(e->position, "pose:t");
    push(e->position + e->direction.coords(), "pose:t+a");
  } else if (const auto* e = std::get_if<AffStiefelPose>(&pose)) {
    push(e->position, "pose:t");
    push(e->position + e->a.coords(), "pose:t+a");
    push(e->position + e->b.coords(), "pose:t+b");
  } else if (const auto* e = std::get_if<StiefelPose>(&pose)) {
    push(e->a.coords(), "pose:a");
    push(e->b.coords(), "pose:b");
  } else if (const auto* e = std::get_if<SpherePose>(&pose)) {
    push(e->point.coords(), "pose:p");
  } else if (const auto* e = std::get_if<GroupPose>(&pose)) {
    const GroupElement& g = e->element;
    const Vec t = has_translation(g.family) ? g.translation : Vec::Zero(g.dim);
    push(t, "pose:t");
    for (int c = 0; c < g.dim; ++c)
      push(t + g.rotation.col(c), "pose:t+Re" + std::to_string(c + 1));
  }
  return cloud;
}

inline AugmentedCloud act_cloud(const GroupElement& g, const AugmentedCloud& cloud) {
  AugmentedCloud out;
  out.labels = cloud.labels;
  out.points.reserve(cloud.points.size());
  for (const Vec& p : cloud.points) out.points.push_back(act_point(g, p));
  return out;
}

struct OrbitVerdict {
  bool same_orbit = false;
  std::optional<GroupElement> witness;
  double residual = 0.0;
};

namespace detail {

inline void check_cloud_pair(const AugmentedCloud& a, const AugmentedCloud& b) {
  if (a.size() != b.size() || a.labels != b.labels)
    throw UsageError("orbit oracle: cloud size/label mismatch");
  if (a.size() == 0) throw UsageError("orbit oracle: empty cloud");
}

/// n x k matrix of cloud points, optionally centered at the centroid.
inline Mat cloud_matrix(const AugmentedCloud& cloud, bool center) {
  const int n = static_cast<int>(cloud.points[0].size());
  const int k = cloud.size();
  Mat M(n, k);
  for (int j = 0; j < k; ++j) M.col(j) = cloud.points[j];
  if (center) M.colwise() -= Vec(M.rowwise().mean());
  return M;
}

/// Max entrywise deviation between pairwise squared-distance matrices.
inline double distance_matrix_gap(const AugmentedCloud& a, const AugmentedCloud& b) {
  double gap = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j) {
      const double da = (a.points[i] - a.points[j]).squaredNorm();
      const double db = (b.points[i] - b.points[j]).squaredNorm();
      gap = std::max(gap, std::abs(da - db));
    }
  return gap;
}

/// Max entrywise deviation between (uncentered) Gram matrices.
inline double gram_matrix_gap(const AugmentedCloud& a, const AugmentedCloud& b) {
  double gap = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = i; j < a.size(); ++j) {
      const double ga = a.points[i].dot(a.points[j]);
      const double gb = b.points[i].dot(b.points[j]);
      gap = std::max(gap, std::abs(ga - gb));
    }
  return gap;
}

inline int span_rank(const Mat& M) {
  const Eigen::JacobiSVD<Mat> svd(M);
  const Vec sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > kSpanRankTol * sv(0)) ++rank;
  return rank;
}

/// Greedy pivot: first column indices of M forming a full-rank n-frame,
/// accepting a column when its residual against the chosen ones exceeds
/// kSpanRankTol times the largest singular value.
inline std::vector<int> greedy_frame_indices(const Mat& M) {
  const int n = static_cast<int>(M.rows());
  const double scale = M.jacobiSvd().singularValues()(0);
  std::vector<int> chosen;
  Mat basis(n, 0);
  for (int j = 0; j < M.cols() && static_cast<int>(chosen.size()) < n; ++j) {
    Vec res = M.col(j);
    if (basis.cols() > 0) res -= basis * (basis.transpose() * res);
    if (res.norm() > kSpanRankTol * scale) {
      basis.conservativeResize(n, basis.cols() + 1);
      basis.col(basis.cols() - 1) = res / res.norm();
      chosen.push_back(j);
    }
  }
  return chosen;
}

inline double frame_det(const Mat& M, const std::vector<int>& indices) {
  const int n = static_cast<int>(M.rows());
  Mat F(n, n);
  for (int i = 0; i < n; ++i) F.col(i) = M.col(indices[i]);
  return F.determinant();
}

/// Orientation agreement for the proper-subgroup branch: true when the span
/// of either cloud is degenerate (a reflection fixing the span exists, so
/// proper and improper orbits coincide) or when the determinant signs of the
/// shared greedy frame agree.
inline bool orientation_compatible(const Mat& A, const Mat& B) {
  const int n = static_cast<int>(A.rows());
  if (span_rank(A) < n || span_rank(B) < n) return true;
  const std::vector<int> idx = greedy_frame_indices(A);
  if (static_cast<int>(idx.size()) < n) return true;
  return frame_det(A, idx) * frame_det(B, idx) > 0.0;
}

}  // namespace detail

/// Least-squares alignment witness (orthogonal Procrustes). E/SE clouds are
/// centered and receive a translation part; O/SO clouds are aligned about
/// the origin. Proper families constrain det(R) = +1 by flipping the
/// direction of smallest singular value, which also completes the frame on
/// rank-deficient spans.
inline GroupElement find_witness(Family family, const AugmentedCloud& a,
                                 const AugmentedCloud& b) {
  detail::check_cloud_pair(a, b);
  const bool affine = has_translation(family);
  const Mat A = detail::cloud_matrix(a, affine);
  const Mat B = detail::cloud_matrix(b, affine);
  const int n = static_cast<int>(A.rows());
  const Mat C = A * B.transpose();  // maximize tr(R C)
  Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat R = svd.matrixV() * svd.matrixU().transpose();
  if (is_proper(family) && R.determinant() < 0.0) {
    Mat D = Mat::Identity(n, n);
    D(n - 1, n - 1) = -1.0;
    R = svd.matrixV() * D * svd.matrixU().transpose();
  }
  Vec t = Vec::Zero(n);
  if (affine) {
    Vec ca = Vec::Zero(n), cb = Vec::Zero(n);
    for (const Vec& p : a.points) ca += p;
    for (const Vec& p : b.points) cb += p;
    ca /= a.size();
    cb /= b.size();
    t = cb - R * ca;
  }
  return GroupElement(family, R, t);
}

inline double alignment_residual(const GroupElement& g, const AugmentedCloud& a,
                                 const AugmentedCloud& b) {
  double res = 0.0;
  for (int i = 0; i < a.size(); ++i)
    res = std::max(res, (act_point(g, a.points[i]) - b.points[i]).cwiseAbs().maxCoeff());
  return res;
}

/// Decides whether two labelled clouds lie in the same orbit of `family`.
///
/// E(n): pairwise squared-distance matrices agree entrywise within tol.
/// SE(n): additionally the clouds are orientation-compatible.
/// O(n)/SO(n): the same with raw Gram matrices and the origin fixed.
///
/// On a positive verdict the aligning witness is recovered and must achieve
/// residual <= kWitnessTol; failing that is an internal inconsistency.
inline OrbitVerdict same_orbit(Family family, const AugmentedCloud& a, const AugmentedCloud& b,
                               double tol = kActionTol) {
  detail::check_cloud_pair(a, b);
  const bool affine = has_translation(family);
  const double gap =
      affine ? detail::distance_matrix_gap(a, b) : detail::gram_matrix_gap(a, b);
  bool same = gap <= tol;
  if (same && is_proper(family))
    same = detail::orientation_compatible(detail::cloud_matrix(a, affine),
                                          detail::cloud_matrix(b, affine));
  OrbitVerdict verdict;
  verdict.same_orbit = same;
  if (same) {
    GroupElement witness = find_witness(family, a, b);
    verdict.residual = alignment_residual(witness, a, b);
    if (verdict.residual > kWitnessTol)
      throw std::logic_error("orbit oracle: alignment failed on a claimed-same-orbit pair");
    verdict.witness = std::move(witness);
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Trial harnesses.
// ---------------------------------------------------------------------------

enum class RhoMode { Canonical, Skipped };

struct InvarianceReport {
  int trials = 0;
  double max_deviation = 0.0;
};

/// Samples (inputs, pose, g) and measures the worst componentwise deviation
/// of the invariant vector under the diagonal action. RhoMode::Skipped
/// evaluates the stabilizer kernel on raw inputs instead (a negative
/// control; only valid for entries that use a canonicalization map).
inline InvarianceReport invariance_trial(const Configuration& config, uint64_t seed, int trials,
                                         RhoMode mode = RhoMode::Canonical) {
  if (trials < 1) throw UsageError("invariance_trial: trials must be >= 1");
  const PoseSpace space = config.pose_space();
  InvarianceReport report;
  report.trials = trials;
  for (int i = 0; i < trials; ++i) {
    Rng rng = trial_rng(seed, i);
    const Vec s = sample_ambient_input(config, rng);
    const Vec r = sample_ambient_input(config, rng);
    const Pose pose = sample_pose(space, rng);
    const GroupElement g = random_group_element(config.family, config.dim, rng, 2.0);
    const Vec gs = act_ambient(config.ambient, g, s);
    const Vec gr = act_ambient(config.ambient, g, r);
    double dev = 0.0;
    if (mode == RhoMode::Canonical) {
      dev = max_abs_difference(catalog_eval(config, s, r, pose),
                               catalog_eval(config, gs, gr, act_pose(g, pose)));
    } else {
      dev = max_abs_difference(catalog_eval_skipping_rho(config, s, r),
                               catalog_eval_skipping_rho(config, gs, gr));
    }
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  return report;
}

struct PopulationTally {
  int pairs = 0;
  int invariants_equal = 0;
  int oracle_same = 0;
  int false_merges = 0;  // invariants equal, oracle says different orbits
  int false_splits = 0;  // invariants differ, oracle says same orbit
  int agreements() const { return pairs - false_merges - false_splits; }
};

struct SeparationReport {
  int pairs_per_population = 0;
  PopulationTally orbit_equal;
  PopulationTally independent;
  PopulationTally perturbed;
  int false_merges() const {
    return orbit_equal.false_merges + independent.false_merges + perturbed.false_merges;
  }
  int false_splits() const {
    return orbit_equal.false_splits + independent.false_splits + perturbed.false_splits;
  }
  int agreements() const {
    return orbit_equal.agreements() + independent.agreements() + perturbed.agreements();
  }
};

namespace detail {

struct TupleSample {
  Vec s;
  Vec r;
  Pose pose;
};

/// Rejects samples whose augmented cloud is full-rank but ill-conditioned
/// (condition number above 1e8); the orientation sign test is numerically
/// fragile there.
inline TupleSample sample_tuple(const Configuration& config, Rng& rng) {
  while (true) {
    TupleSample t{sample_ambient_input(config, rng), sample_ambient_input(config, rng),
                  sample_pose(config.pose_space(), rng)};
    if (!is_proper(config.family)) return t;
    const AugmentedCloud cloud = augment(config, t.s, t.r, t.pose);
    const Mat M = cloud_matrix(cloud, has_translation(config.family));
    const Vec sv = M.jacobiSvd().singularValues();
    const double smallest = sv(sv.size() - 1);
    // Accept clouds that are either clearly rank-deficient or comfortably
    // full-rank; the band in between is where the sign test gets fragile.
    if (smallest <= 1e-10 * sv(0) || smallest >= 1e-6 * sv(0)) return t;
  }
}

inline Vec perturb_vec(const Vec& v, double eps, Rng& rng) {
  return v + eps * gaussian_vec(static_cast<int>(v.size()), rng);
}

/// Additive noise of scale eps with re-projection onto the unit/frame/group
/// constraints.
inline TupleSample perturb_tuple(const Configuration& config, const TupleSample& t, double eps,
                                 Rng& rng) {
  TupleSample out = t;
  out.s = perturb_vec(t.s, eps, rng);
  out.r = perturb_vec(t.r, eps, rng);
  if (config.ambient == AmbientKind::Sphere) {
    out.s.normalize();
    out.r.normalize();
  }
  auto renorm = [&](const UnitVec& u) {
    return UnitVec::normalized(perturb_vec(u.coords(), eps, rng));
  };
  auto reframe = [&](const UnitVec& a, const UnitVec& b) {
    const Vec av = perturb_vec(a.coords(), eps, rng);
    const Vec bv = perturb_vec(b.coords(), eps, rng);
    const Vec an = av / av.norm();
    const Vec res = bv - bv.dot(an) * an;
    return std::pair<UnitVec, UnitVec>(UnitVec(an), UnitVec(Vec(res / res.norm())));
  };
  if (const auto* e = std::get_if<EuclPointPose>(&t.pose)) {
    out.pose = EuclPointPose{perturb_vec(e->point, eps, rng)};
  } else if (const auto* e = std::get_if<PosOriPose>(&t.pose)) {
    out.pose = PosOriPose{perturb_vec(e->position, eps, rng), renorm(e->direction)};
  } else if (const auto* e = std::get_if<AffStiefelPose>(&t.pose)) {
    auto [a, b] = reframe(e->a, e->b);
    out.pose = AffStiefelPose{perturb_vec(e->position, eps, rng), a, b};
  } else if (const auto* e = std::get_if<StiefelPose>(&t.pose)) {
    auto [a, b] = reframe(e->a, e->b);
    out.pose = StiefelPose{a, b};
  } else if (const auto* e = std::get_if<SpherePose>(&t.pose)) {
    out.pose = SpherePose{renorm(e->point)};
  } else if (const auto* e = std::get_if<GroupPose>(&t.pose)) {
    const GroupElement& g = e->element;
    Mat R = g.rotation;
    for (int j = 0; j < R.cols(); ++j) R.col(j) = perturb_vec(R.col(j), eps, rng);
    // re-orthonormalize via polar projection
    Eigen::JacobiSVD<Mat> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat Q = svd.matrixU() * svd.matrixV().transpose();
    if (is_proper(g.family) && Q.determinant() < 0.0) Q.col(Q.cols() - 1) *= -1.0;
    Vec tr = has_translation(g.family) ? Vec(perturb_vec(g.translation, eps, rng))
                                       : Vec::Zero(g.dim);
    out.pose = GroupPose{GroupElement(g.family, Q, tr)};
  }
  return out;
}

}  // namespace detail

/// Cross-tabulates invariant-vector equality against the orbit oracle on
/// three pair populations: orbit-equal pairs, independent random pairs, and
/// eps-perturbed pairs (eps = 1e-3).
inline SeparationReport separation_trial(const Configuration& config, uint64_t seed, int pairs,
                                         double invariant_tol = 1e-7,
                                         double oracle_tol = kActionTol) {
  if (pairs < 1) throw UsageError("separation_trial: trials must be >= 1");
  SeparationReport report;
  report.pairs_per_population = pairs;
  constexpr double kPerturbation = 1e-3;

  auto tabulate = [&](PopulationTally& tally, const detail::TupleSample& a,
                      const detail::TupleSample& b) {
    const FeatureVector fa = catalog_eval(config, a.s, a.r, a.pose);
    const FeatureVector fb = catalog_eval(config, b.s, b.r, b.pose);
    const bool inv_equal = max_abs_difference(fa, fb) <= invariant_tol;
    const OrbitVerdict verdict = same_orbit(config.family, augment(config, a.s, a.r, a.pose),
                                            augment(config, b.s, b.r, b.pose), oracle_tol);
    ++tally.pairs;
    if (inv_equal) ++tally.invariants_equal;
    if (verdict.same_orbit) ++tally.oracle_same;
    if (inv_equal && !verdict.same_orbit) ++tally.false_merges;
    if (!inv_equal && verdict.same_orbit) ++tally.false_splits;
  };

  for (int i = 0; i < pairs; ++i) {
    Rng rng = trial_rng(seed, i);
    const detail::TupleSample base = detail::sample_tuple(config, rng);
    const GroupElement g = random_group_element(config.family, config.dim, rng, 2.0);
    detail::TupleSample moved{act_ambient(config.ambient, g, base.s),
                              act_ambient(config.ambient, g, base.r), act_pose(g, base.pose)};
    tabulate(report.orbit_equal, base, moved);

    const detail::TupleSample other = detail::sample_tuple(config, rng);
    tabulate(report.independent, base, other);

    const detail::TupleSample nearby = detail::perturb_tuple(config, base, kPerturbation, rng);
    tabulate(report.perturbed, base, nearby);
  }
  return report;
}

}  // namespace invlift
