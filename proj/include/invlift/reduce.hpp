#pragma once

#include <functional>
#include <tuple>
#include <optional>
#include <vector>

#include "invlift/kernels.hpp"
#include "invlift/pose.hpp"

namespace invlift {

enum class AmbientKind { Euclidean, Sphere };

/// One catalog configuration: the acting group, the ambient input space for
/// the (s, r) pair, and the latent pose space. Keys follow
/// "GROUP/AMBIENT/POSE", e.g. "SE3/R3/pos-ori".
struct Configuration {
  Family family;
  int dim;
  AmbientKind ambient;
  PoseKind pose_kind;

  int arity() const { return 2; }

  PoseSpace pose_space() const { return PoseSpace(pose_kind, family, dim); }

  std::string group_key() const { return family_name(family) + std::to_string(dim); }

  std::string ambient_key() const {
    return ambient == AmbientKind::Euclidean ? "R" + std::to_string(dim) : "S2";
  }

  std::string key() const { return group_key() + "/" + ambient_key() + "/" + pose_kind_name(pose_kind); }

  bool operator==(const Configuration&) const = default;
};

/// Applies g to an ambient input: affinely for Euclidean inputs, linearly
/// for points on the sphere.
inline Vec act_ambient(AmbientKind ambient, const GroupElement& g, const Vec& x) {
  if (ambient == AmbientKind::Euclidean) return act_point(g, x);
  if (x.size() != g.dim) throw UsageError("act_ambient: dimension mismatch");
  return g.rotation * x;
}

using TupleKernel = std::function<FeatureVector(const std::vector<Vec>&)>;

/// An H-invariant kernel lifted to a G-invariant on X^m x (pose space) by
/// canonicalizing the pose: f(x_1, ..., x_m, p) = kernel(rho(p).x_1, ...).
struct LiftedInvariant {
  PoseSpace space;
  AmbientKind ambient;
  TupleKernel kernel;

  FeatureVector eval(const std::vector<Vec>& inputs, const Pose& pose) const {
    return eval_with(inputs, canonicalize(space, pose));
  }

  /// Evaluates through an explicitly supplied canonicalization element.
  FeatureVector eval_with(const std::vector<Vec>& inputs, const GroupElement& rho) const {
    std::vector<Vec> canon;
    canon.reserve(inputs.size());
    for (const Vec& x : inputs) canon.push_back(act_ambient(ambient, rho, x));
    return kernel(canon);
  }
};

inline LiftedInvariant lift(const PoseSpace& space, AmbientKind ambient, TupleKernel kernel) {
  return LiftedInvariant{space, ambient, std::move(kernel)};
}

/// The trivial-stabilizer shortcut for pose space G itself: any kernel
/// becomes G-invariant through f(x, g) = kernel(g^-1 . x).
inline LiftedInvariant group_latent(Family family, int dim, AmbientKind ambient, TupleKernel kernel) {
  return lift(PoseSpace(PoseKind::FullGroup, family, dim), ambient, std::move(kernel));
}

/// Identity kernel: the canonicalized coordinates themselves, labelled
/// (p^-1 s)_i, (p^-1 r)_i.
inline TupleKernel coordinate_kernel(int dim) {
  return [dim](const std::vector<Vec>& xs) {
    static const char* names[2] = {"s", "r"};
    if (xs.size() != 2) throw UsageError("coordinate_kernel: expects two inputs");
    FeatureVector out;
    out.values.resize(2 * dim);
    for (int i = 0; i < 2; ++i) {
      if (xs[i].size() != dim) throw UsageError("coordinate_kernel: dimension mismatch");
      for (int c = 0; c < dim; ++c) {
        out.labels.push_back(std::string("(p^-1 ") + names[i] + ")_" + std::to_string(c + 1));
        out.values(i * dim + c) = xs[i](c);
      }
    }
    return out;
  };
}

enum class EvalRoute { Direct, Lifted, Group };

struct CatalogEntry {
  Configuration config;
  EvalRoute route;
  std::string stabilizer;
  std::string invariants;  // display formula for the separating set
  std::vector<std::string> labels;
  // Direct entries consume the pose as a third input point; lifted/group
  // entries canonicalize the pose and feed (s, r) through `lifted`.
  std::function<FeatureVector(const Vec&, const Vec&, const Vec&)> direct;
  std::optional<LiftedInvariant> lifted;
};

namespace detail {

inline TupleKernel pair_kernel(FeatureVector (*fn)(const Vec&, const Vec&)) {
  return [fn](const std::vector<Vec>& xs) {
    if (xs.size() != 2) throw UsageError("kernel: expects two inputs");
    return fn(xs[0], xs[1]);
  };
}

inline std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> entries;
  auto direct = [&](Configuration cfg, std::string stab, std::string inv,
                    FeatureVector (*fn)(const Vec&, const Vec&, const Vec&)) {
    CatalogEntry e{cfg, EvalRoute::Direct, std::move(stab), std::move(inv), {}, fn, std::nullopt};
    Vec z = Vec::Zero(cfg.ambient == AmbientKind::Euclidean ? cfg.dim : 3);
    if (cfg.ambient == AmbientKind::Sphere) z(0) = 1.0;
    e.labels = fn(z, z, z).labels;
    entries.push_back(std::move(e));
  };
  auto lifted = [&](Configuration cfg, std::string stab, std::string inv,
                    FeatureVector (*fn)(const Vec&, const Vec&)) {
    LiftedInvariant li = lift(cfg.pose_space(), cfg.ambient, pair_kernel(fn));
    CatalogEntry e{cfg, EvalRoute::Lifted, std::move(stab), std::move(inv), {}, nullptr, li};
    Vec z = Vec::Zero(cfg.ambient == AmbientKind::Euclidean ? cfg.dim : 3);
    if (cfg.ambient == AmbientKind::Sphere) z(0) = 1.0;
    e.labels = fn(z, z).labels;
    entries.push_back(std::move(e));
  };
  auto group = [&](Configuration cfg, std::string inv) {
    const int adim = cfg.ambient == AmbientKind::Euclidean ? cfg.dim : 3;
    LiftedInvariant li = group_latent(cfg.family, cfg.dim, cfg.ambient, coordinate_kernel(adim));
    CatalogEntry e{cfg, EvalRoute::Group, "{e}", std::move(inv), {}, nullptr, li};
    std::vector<Vec> zs(2, Vec::Zero(adim));
    e.labels = li.kernel(zs).labels;
    entries.push_back(std::move(e));
  };

  using K = PoseKind;
  using A = AmbientKind;

  direct({Family::E, 2, A::Euclidean, K::EuclPoint}, "O(2)",
         "{|s-r|^2, |s-p|^2, |r-p|^2}", euclid_triple_E);
  lifted({Family::E, 2, A::Euclidean, K::PosOri2}, "O(1) = {I, diag(1,-1)}",
         "{s_1, r_1, |s_2|^2, |r_2|^2, |s_2-r_2|^2} on rho(p)-canonicalized (s, r)",
         stab_O1_in_E2);
  group({Family::E, 2, A::Euclidean, K::FullGroup}, "{p^-1 s, p^-1 r}");

  direct({Family::SE, 2, A::Euclidean, K::EuclPoint}, "SO(2)",
         "{|s-r|^2, |s-p|^2, |r-p|^2, det(s-p, r-p)}", euclid_triple_SE2);
  group({Family::SE, 2, A::Euclidean, K::FullGroup}, "{p^-1 s, p^-1 r}");

  direct({Family::E, 3, A::Euclidean, K::EuclPoint}, "O(3)",
         "{|s-r|^2, |s-p|^2, |r-p|^2}", euclid_triple_E);
  lifted({Family::E, 3, A::Euclidean, K::PosOri3}, "O(2) block fixing e1",
         "{s_1, r_1, |(s_2,s_3)|^2, |(r_2,r_3)|^2, |(s_2-r_2,s_3-r_3)|^2} on rho(p)-canonicalized (s, r)",
         stab_O2_in_E3);
  lifted({Family::E, 3, A::Euclidean, K::AffStiefel23}, "O(1) = {I, diag(1,1,-1)}",
         "{s_1, r_1, s_2, r_2, |s_3|^2, |r_3|^2, |s_3-r_3|^2} on rho(p)-canonicalized (s, r)",
         stab_O1_in_E3);
  group({Family::E, 3, A::Euclidean, K::FullGroup}, "{p^-1 s, p^-1 r}");

  direct({Family::SE, 3, A::Euclidean, K::EuclPoint}, "SO(3)",
         "{|s-r|^2, |s-p|^2, |r-p|^2} (triplet orbits agree for SE(3) and E(3))",
         euclid_triple_E);
  lifted({Family::SE, 3, A::Euclidean, K::PosOri3}, "SO(2) block fixing e1",
         "{s_1, r_1, |(s_2,s_3)|^2, |(r_2,r_3)|^2, |(s_2-r_2,s_3-r_3)|^2, det((s_2,s_3),(r_2,r_3))} "
         "on rho(p)-canonicalized (s, r)",
         stab_SO2_in_SE3);
  group({Family::SE, 3, A::Euclidean, K::FullGroup}, "{p^-1 s, p^-1 r}");

  direct({Family::O, 3, A::Sphere, K::Sphere2}, "O(2) block fixing e1",
         "{|s-r|^2, |s-p|^2, |r-p|^2} restricted to S^2", euclid_triple_E);
  lifted({Family::O, 3, A::Sphere, K::Stiefel23}, "O(1) = {I, diag(1,1,-1)}",
         "{s_1, s_2, r_1, r_2, s_3*r_3} on rho(p)-canonicalized (s, r)", sphere_O1_minimal);
  group({Family::O, 3, A::Sphere, K::FullGroup}, "{p^T s, p^T r}");

  direct({Family::SO, 3, A::Sphere, K::Sphere2}, "SO(2) block fixing e1",
         "{|s-r|^2, |s-p|^2, |r-p|^2, det(s, r, p)} restricted to S^2", sphere_triple_SO3);
  group({Family::SO, 3, A::Sphere, K::FullGroup}, "{p^T s, p^T r}");

  return entries;
}

}  // namespace detail

/// The fixed 17-entry configuration catalog, in stable order.
inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = detail::build_catalog();
  return entries;
}

inline std::string catalog_keys_message() {
  std::string msg = "valid configurations:";
  for (const CatalogEntry& e : catalog()) msg += " " + e.config.key();
  return msg;
}

inline const CatalogEntry& catalog_entry(const Configuration& config) {
  for (const CatalogEntry& e : catalog())
    if (e.config == config) return e;
  throw UsageError("unknown configuration; " + catalog_keys_message());
}

inline const CatalogEntry& catalog_entry(const std::string& key) {
  for (const CatalogEntry& e : catalog())
    if (e.config.key() == key) return e;
  throw UsageError("unknown configuration key '" + key + "'; " + catalog_keys_message());
}

inline void validate_ambient_input(const Configuration& config, const Vec& x, const char* name) {
  const int adim = config.ambient == AmbientKind::Euclidean ? config.dim : 3;
  if (x.size() != adim)
    throw ValidationError(std::string(name) + ": expected " + std::to_string(adim) + " coordinates");
  if (!all_finite(x)) throw ValidationError(std::string(name) + ": non-finite coordinates");
  if (config.ambient == AmbientKind::Sphere && std::abs(x.norm() - 1.0) > kOrthoTol)
    throw ValidationError(std::string(name) + ": not on the unit sphere");
}

/// Extracts the point carried by a Direct-route pose (Euclidean point or
/// sphere point).
inline Vec direct_pose_point(const Pose& pose) {
  if (const auto* e = std::get_if<EuclPointPose>(&pose)) return e->point;
  if (const auto* e = std::get_if<SpherePose>(&pose)) return e->point.coords();
  throw UsageError("direct_pose_point: pose does not carry a single point");
}

/// Evaluates the separating-invariant set of `config` at (s, r, pose).
inline FeatureVector catalog_eval(const Configuration& config, const Vec& s, const Vec& r,
                                  const Pose& pose) {
  const CatalogEntry& entry = catalog_entry(config);
  validate_ambient_input(config, s, "s");
  validate_ambient_input(config, r, "r");
  validate_pose(config.pose_space(), pose);
  if (entry.route == EvalRoute::Direct) return entry.direct(s, r, direct_pose_point(pose));
  return entry.lifted->eval({s, r}, pose);
}

/// As catalog_eval but routes lifted/group entries through a caller-supplied
/// canonicalization element (for rho-independence checks). Direct entries do
/// not use a canonicalization map.
inline FeatureVector catalog_eval_with(const Configuration& config, const Vec& s, const Vec& r,
                                       const GroupElement& rho) {
  const CatalogEntry& entry = catalog_entry(config);
  if (entry.route == EvalRoute::Direct)
    throw UsageError("catalog_eval_with: entry does not use a canonicalization map");
  validate_ambient_input(config, s, "s");
  validate_ambient_input(config, r, "r");
  return entry.lifted->eval_with({s, r}, rho);
}

/// The stabilizer kernel of a lifted/group entry applied to raw inputs,
/// skipping canonicalization entirely. Not G-invariant; serves as the
/// negative control for the invariance harness.
inline FeatureVector catalog_eval_skipping_rho(const Configuration& config, const Vec& s,
                                               const Vec& r) {
  const CatalogEntry& entry = catalog_entry(config);
  if (entry.route == EvalRoute::Direct)
    throw UsageError("catalog_eval_skipping_rho: entry does not use a canonicalization map");
  return entry.lifted->kernel({s, r});
}

/// Random ambient input for a configuration: box-uniform in [-2,2]^n for
/// Euclidean inputs, uniform on S^2 for spherical ones.
inline Vec sample_ambient_input(const Configuration& config, Rng& rng) {
  if (config.ambient == AmbientKind::Euclidean) return uniform_box_vec(config.dim, 2.0, rng);
  return UnitVec::normalized(gaussian_vec(3, rng)).coords();
}

// ---------------------------------------------------------------------------
// Cross-reduction consistency.
//
// For X x M1 x M2 with M1 = R^n (stabilizer of the origin) and M2 = G
// (trivial stabilizer), reducing along either factor must give the same
// invariant: f_H1(T1(x, p, q)) = f_H2(T2(x, p, q)). With M2 = G the induced
// H1-invariant has the closed form f_H1(x', q') = f_H2(q'^-1 . x', q'^-1 . p0),
// where p0 = 0 is the base point of M1.
// ---------------------------------------------------------------------------

using PointKernel = std::function<FeatureVector(const std::vector<Vec>&, const Vec&)>;

struct CrossReductionResult {
  FeatureVector via_point_latent;  // reduce along M1 = R^n
  FeatureVector via_group_latent;  // reduce along M2 = G
  double disagreement() const { return max_abs_difference(via_point_latent, via_group_latent); }
};

inline CrossReductionResult cross_reduction_check(Family family, int dim,
                                                  const std::vector<Vec>& xs, const Vec& p,
                                                  const GroupElement& q, const PointKernel& fH2) {
  if (family != Family::SE && family != Family::E)
    throw UsageError("cross_reduction_check: needs an affine family");
  if (q.family != family || q.dim != dim || p.size() != dim)
    throw UsageError("cross_reduction_check: family/dimension mismatch");

  // Route 2: canonicalize along M2 = G with rho2(q) = q^-1.
  const GroupElement q_inv = inverse(q);
  std::vector<Vec> xs2;
  xs2.reserve(xs.size());
  for (const Vec& x : xs) xs2.push_back(act_point(q_inv, x));
  FeatureVector side2 = fH2(xs2, act_point(q_inv, p));

  // Route 1: canonicalize along M1 = R^n with rho1(p) = (I, -p), then apply
  // the induced H1-invariant to the transported (x, q).
  const GroupElement rho1(family, Mat::Identity(dim, dim), Vec(-p));
  const GroupElement q_moved = compose(rho1, q);
  const GroupElement q_moved_inv = inverse(q_moved);
  std::vector<Vec> xs1;
  xs1.reserve(xs.size());
  for (const Vec& x : xs) xs1.push_back(act_point(q_moved_inv, act_point(rho1, x)));
  FeatureVector side1 = fH2(xs1, act_point(q_moved_inv, Vec(Vec::Zero(dim))));

  return CrossReductionResult{std::move(side1), std::move(side2)};
}

/// A deliberately non-invariant probe kernel on (x_1, x_2, v): raw
/// coordinates plus a few mixed polynomial terms, so any mismatch between
/// the two reduction routes shows up in some entry.
inline PointKernel cross_reduction_probe_kernel() {
  return [](const std::vector<Vec>& xs, const Vec& v) {
    if (xs.size() != 2) throw UsageError("probe kernel: expects two inputs");
    const int n = static_cast<int>(v.size());
    FeatureVector out;
    out.values.resize(3 * n + 3);
    int k = 0;
    for (int i = 0; i < 2; ++i)
      for (int c = 0; c < n; ++c) {
        out.labels.push_back("x" + std::to_string(i + 1) + "_" + std::to_string(c + 1));
        out.values(k++) = xs[i](c);
      }
    for (int c = 0; c < n; ++c) {
      out.labels.push_back("v_" + std::to_string(c + 1));
      out.values(k++) = v(c);
    }
    out.labels.insert(out.labels.end(), {"<x1,v>", "<x2,v>", "|x1-x2|^2"});
    out.values(k++) = xs[0].dot(v);
    out.values(k++) = xs[1].dot(v);
    out.values(k++) = (xs[0] - xs[1]).squaredNorm();
    return out;
  };
}

// ---------------------------------------------------------------------------
// Iterated reduction along SE(3) > SO(3) > SO(2) > {e}.
// ---------------------------------------------------------------------------

struct ChainResidue {
  Vec x;
  Vec d;
  Vec c;
  /// Max coordinate deviation from the canonical residue (0, e1, e2).
  double deviation() const {
    double dev = x.cwiseAbs().maxCoeff();
    Vec e1 = Vec::Zero(3), e2 = Vec::Zero(3);
    e1(0) = 1.0;
    e2(1) = 1.0;
    dev = std::max(dev, (d - e1).cwiseAbs().maxCoeff());
    return std::max(dev, (c - e2).cwiseAbs().maxCoeff());
  }
};

/// Canonicalizes a flag (x, d, c) with c orthogonal to d through the chain of
/// quotients R^3, S^2, S^1: translate x to the origin, rotate d onto e1, then
/// rotate the transported c within the (2,3)-plane onto e2. Every valid input
/// lands on (0, e1, e2) — the chain exhausts all degrees of freedom, so the
/// only invariants of such flags are constants.
inline ChainResidue iterated_chain_SE3(const Vec& x, const UnitVec& d, const UnitVec& c) {
  if (x.size() != 3 || d.dim() != 3 || c.dim() != 3)
    throw UsageError("iterated_chain_SE3: expects R^3 data");
  if (!all_finite(x)) throw ValidationError("iterated_chain_SE3: non-finite point");
  if (std::abs(d.coords().dot(c.coords())) > kOrthoTol)
    throw ValidationError("iterated_chain_SE3: c must be orthogonal to d");

  // Stage 1: R^3 = SE(3)/SO(3); translate x to the origin. Directions are
  // unaffected by the translation.
  const GroupElement shift(Family::SE, Mat::Identity(3, 3), Vec(-x));
  Vec x1 = act_point(shift, x);

  // Stage 2: S^2 = SO(3)/SO(2); rotate d onto e1.
  const Mat A = frame_from_direction(d).rotation.transpose();
  Vec d2 = A * d.coords();
  Vec c2 = A * c.coords();

  // Stage 3: S^1 = SO(2)/{e}; rotate the (2,3)-tail of c onto (1, 0).
  const Eigen::Vector2d w(c2(1), c2(2));
  const Eigen::Vector2d u = w.normalized();
  Mat B = Mat::Identity(3, 3);
  B(1, 1) = u(0);
  B(1, 2) = u(1);
  B(2, 1) = -u(1);
  B(2, 2) = u(0);
  return ChainResidue{x1, B * d2, B * c2};
}

/// Random valid flag for the chain: x in [-2,2]^3, d uniform on S^2, c a
/// Gram-Schmidt-orthogonalized Gaussian in the tangent plane at d.
inline std::tuple<Vec, UnitVec, UnitVec> sample_chain_flag(Rng& rng) {
  while (true) {
    const Vec dv = gaussian_vec(3, rng);
    if (dv.norm() < 1e-6) continue;
    const Vec d = dv / dv.norm();
    const Vec w = gaussian_vec(3, rng);
    const Vec res = w - w.dot(d) * d;
    if (res.norm() < 1e-6) continue;
    return {uniform_box_vec(3, 2.0, rng), UnitVec(d), UnitVec(Vec(res / res.norm()))};
  }
}

}  // namespace invlift
