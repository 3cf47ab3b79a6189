#pragma once

#include <string>
#include <variant>
#include <vector>

#include "invlift/group.hpp"

namespace invlift {

/// The homogeneous latent spaces carried by the catalog. Each is a quotient
/// G/H of one of the isometry families by the stabilizer of a base point.
enum class PoseKind {
  EuclPoint,     // R^n = E(n)/O(n) or SE(n)/SO(n)
  PosOri2,       // R^2 x S^1 = E(2)/O(1)
  PosOri3,       // R^3 x S^2 = E(3)/O(2) or SE(3)/SO(2)
  AffStiefel23,  // R^3 x V_{2,3} = E(3)/O(1)
  Stiefel23,     // V_{2,3} = O(3)/O(1)
  Sphere2,       // S^2 = O(3)/O(2) or SO(3)/SO(2)
  FullGroup,     // G itself, trivial stabilizer
};

inline std::string pose_kind_name(PoseKind k) {
  switch (k) {
    case PoseKind::EuclPoint: return "point";
    case PoseKind::PosOri2: return "pos-ori";
    case PoseKind::PosOri3: return "pos-ori";
    case PoseKind::AffStiefel23: return "aff-stiefel";
    case PoseKind::Stiefel23: return "stiefel";
    case PoseKind::Sphere2: return "sphere";
    case PoseKind::FullGroup: return "group";
  }
  return "?";
}

/// A latent space together with the group acting on it. The acting family
/// decides the stabilizer subgroup (e.g. Sphere2 under O(3) has H = O(2),
/// under SO(3) it has H = SO(2)).
struct PoseSpace {
  PoseKind kind;
  Family family;
  int dim;  // ambient dimension n of the acting group

  PoseSpace(PoseKind k, Family f, int n) : kind(k), family(f), dim(n) {
    const bool affine = has_translation(f);
    switch (kind) {
      case PoseKind::EuclPoint:
        if (!affine || n < 1 || n > 3) throw UsageError("EuclPoint needs E/SE, n in {1,2,3}");
        break;
      case PoseKind::PosOri2:
        if (!affine || n != 2) throw UsageError("PosOri2 needs E(2)/SE(2)");
        break;
      case PoseKind::PosOri3:
        if (!affine || n != 3) throw UsageError("PosOri3 needs E(3)/SE(3)");
        break;
      case PoseKind::AffStiefel23:
        if (!affine || n != 3) throw UsageError("AffStiefel23 needs E(3)/SE(3)");
        break;
      case PoseKind::Stiefel23:
        if (affine || n != 3) throw UsageError("Stiefel23 needs O(3)/SO(3)");
        break;
      case PoseKind::Sphere2:
        if (affine || n != 3) throw UsageError("Sphere2 needs O(3)/SO(3)");
        break;
      case PoseKind::FullGroup:
        if (n < 1 || n > 3) throw UsageError("FullGroup needs n in {1,2,3}");
        break;
    }
  }

  std::string name() const {
    return pose_kind_name(kind) + "(" + family_name(family) + std::to_string(dim) + ")";
  }

  bool operator==(const PoseSpace&) const = default;
};

struct EuclPointPose {
  Vec point;
};
struct PosOriPose {
  Vec position;
  UnitVec direction;
};
struct AffStiefelPose {
  Vec position;
  UnitVec a;
  UnitVec b;
};
struct StiefelPose {
  UnitVec a;
  UnitVec b;
};
struct SpherePose {
  UnitVec point;
};
struct GroupPose {
  GroupElement element;
};

using Pose = std::variant<EuclPointPose, PosOriPose, AffStiefelPose, StiefelPose, SpherePose, GroupPose>;

/// Checks that `p` is a well-formed element of `space` (tag, dimensions,
/// unit/orthogonality constraints within kOrthoTol).
inline void validate_pose(const PoseSpace& space, const Pose& p) {
  switch (space.kind) {
    case PoseKind::EuclPoint: {
      const auto* e = std::get_if<EuclPointPose>(&p);
      if (!e) throw ValidationError("pose: expected a point pose");
      if (e->point.size() != space.dim) throw ValidationError("pose: point dimension mismatch");
      if (!all_finite(e->point)) throw ValidationError("pose: non-finite point");
      break;
    }
    case PoseKind::PosOri2:
    case PoseKind::PosOri3: {
      const auto* e = std::get_if<PosOriPose>(&p);
      if (!e) throw ValidationError("pose: expected a pos-ori pose");
      if (e->position.size() != space.dim || e->direction.dim() != space.dim)
        throw ValidationError("pose: pos-ori dimension mismatch");
      if (!all_finite(e->position)) throw ValidationError("pose: non-finite position");
      break;
    }
    case PoseKind::AffStiefel23: {
      const auto* e = std::get_if<AffStiefelPose>(&p);
      if (!e) throw ValidationError("pose: expected an aff-stiefel pose");
      if (e->position.size() != 3 || e->a.dim() != 3 || e->b.dim() != 3)
        throw ValidationError("pose: aff-stiefel dimension mismatch");
      if (!all_finite(e->position)) throw ValidationError("pose: non-finite position");
      if (std::abs(e->a.coords().dot(e->b.coords())) > kOrthoTol)
        throw ValidationError("pose: aff-stiefel frame not orthonormal");
      break;
    }
    case PoseKind::Stiefel23: {
      const auto* e = std::get_if<StiefelPose>(&p);
      if (!e) throw ValidationError("pose: expected a stiefel pose");
      if (e->a.dim() != 3 || e->b.dim() != 3)
        throw ValidationError("pose: stiefel dimension mismatch");
      if (std::abs(e->a.coords().dot(e->b.coords())) > kOrthoTol)
        throw ValidationError("pose: stiefel frame not orthonormal");
      break;
    }
    case PoseKind::Sphere2: {
      const auto* e = std::get_if<SpherePose>(&p);
      if (!e) throw ValidationError("pose: expected a sphere pose");
      if (e->point.dim() != 3) throw ValidationError("pose: sphere point must lie in R^3");
      break;
    }
    case PoseKind::FullGroup: {
      const auto* e = std::get_if<GroupPose>(&p);
      if (!e) throw ValidationError("pose: expected a group pose");
      if (e->element.family != space.family || e->element.dim != space.dim)
        throw ValidationError("pose: group element family/dimension mismatch");
      break;
    }
  }
}

inline Pose base_point(const PoseSpace& space) {
  const int n = space.dim;
  auto unit = [n](int i) {
    Vec v = Vec::Zero(n);
    v(i) = 1.0;
    return UnitVec(v);
  };
  switch (space.kind) {
    case PoseKind::EuclPoint: return EuclPointPose{Vec::Zero(n)};
    case PoseKind::PosOri2:
    case PoseKind::PosOri3: return PosOriPose{Vec::Zero(n), unit(0)};
    case PoseKind::AffStiefel23: return AffStiefelPose{Vec::Zero(3), unit(0), unit(1)};
    case PoseKind::Stiefel23: return StiefelPose{unit(0), unit(1)};
    case PoseKind::Sphere2: return SpherePose{unit(0)};
    case PoseKind::FullGroup: return GroupPose{GroupElement::identity(space.family, n)};
  }
  throw UsageError("base_point: unknown pose kind");
}

/// Diagonal action of g on a pose: translation components move by act_point,
/// direction and frame components by act_direction, group components by left
/// composition.
inline Pose act_pose(const GroupElement& g, const Pose& p) {
  if (const auto* e = std::get_if<EuclPointPose>(&p)) return EuclPointPose{act_point(g, e->point)};
  if (const auto* e = std::get_if<PosOriPose>(&p))
    return PosOriPose{act_point(g, e->position), act_direction(g, e->direction)};
  if (const auto* e = std::get_if<AffStiefelPose>(&p))
    return AffStiefelPose{act_point(g, e->position), act_direction(g, e->a), act_direction(g, e->b)};
  if (const auto* e = std::get_if<StiefelPose>(&p))
    return StiefelPose{act_direction(g, e->a), act_direction(g, e->b)};
  if (const auto* e = std::get_if<SpherePose>(&p)) return SpherePose{act_direction(g, e->point)};
  if (const auto* e = std::get_if<GroupPose>(&p)) return GroupPose{compose(g, e->element)};
  throw UsageError("act_pose: unknown pose kind");
}

/// The canonicalization map rho with rho(p) . p = base_point(space).
/// Frame-valued spaces use the transpose of the completed frame, affine
/// spaces additionally cancel the translation, and the full group maps
/// g to its inverse.
inline GroupElement canonicalize(const PoseSpace& space, const Pose& p) {
  validate_pose(space, p);
  const Family f = space.family;
  auto affine_inverse = [f](const Mat& A, const Vec& t) {
    Mat At = A.transpose();
    return GroupElement(f, At, Vec(-(At * t)));
  };
  switch (space.kind) {
    case PoseKind::EuclPoint: {
      const auto& e = std::get<EuclPointPose>(p);
      return GroupElement(f, Mat::Identity(space.dim, space.dim), Vec(-e.point));
    }
    case PoseKind::PosOri2: {
      const auto& e = std::get<PosOriPose>(p);
      return affine_inverse(frame_from_direction_2d(e.direction).rotation, e.position);
    }
    case PoseKind::PosOri3: {
      const auto& e = std::get<PosOriPose>(p);
      return affine_inverse(frame_from_direction(e.direction).rotation, e.position);
    }
    case PoseKind::AffStiefel23: {
      const auto& e = std::get<AffStiefelPose>(p);
      return affine_inverse(frame_from_2frame(e.a, e.b).rotation, e.position);
    }
    case PoseKind::Stiefel23: {
      const auto& e = std::get<StiefelPose>(p);
      return GroupElement::rotation_only(f, frame_from_2frame(e.a, e.b).rotation.transpose());
    }
    case PoseKind::Sphere2: {
      const auto& e = std::get<SpherePose>(p);
      return GroupElement::rotation_only(f, frame_from_direction(e.point).rotation.transpose());
    }
    case PoseKind::FullGroup: return inverse(std::get<GroupPose>(p).element);
  }
  throw UsageError("canonicalize: unknown pose kind");
}

/// Block-matrix description of the stabilizer H = Stab(base_point): the
/// orthogonal component type, its size, and which ambient coordinates it
/// moves. h_dim = 0 marks the trivial subgroup.
struct StabilizerDescriptor {
  Family h_family;
  int h_dim;
  std::vector<int> moving_coords;

  std::string name() const {
    if (h_dim == 0) return "{e}";
    return family_name(h_family) + "(" + std::to_string(h_dim) + ")";
  }
};

inline StabilizerDescriptor stabilizer_descriptor(const PoseSpace& space) {
  const Family block = is_proper(space.family) ? Family::SO : Family::O;
  auto coords = [](int first, int last) {
    std::vector<int> out;
    for (int i = first; i <= last; ++i) out.push_back(i);
    return out;
  };
  switch (space.kind) {
    case PoseKind::EuclPoint:
      return {block, space.dim, coords(0, space.dim - 1)};
    case PoseKind::PosOri2:
      return block == Family::SO ? StabilizerDescriptor{block, 0, {}}
                                 : StabilizerDescriptor{block, 1, {1}};
    case PoseKind::PosOri3:
    case PoseKind::Sphere2:
      return {block, 2, {1, 2}};
    case PoseKind::AffStiefel23:
    case PoseKind::Stiefel23:
      return block == Family::SO ? StabilizerDescriptor{block, 0, {}}
                                 : StabilizerDescriptor{block, 1, {2}};
    case PoseKind::FullGroup:
      return {block, 0, {}};
  }
  throw UsageError("stabilizer_descriptor: unknown pose kind");
}

/// Random element of H = Stab(base_point). Disconnected stabilizers are
/// sampled across all components.
inline GroupElement stabilizer_sample(const PoseSpace& space, Rng& rng) {
  const Family f = space.family;
  const int n = space.dim;
  const bool proper = is_proper(f);
  auto coin = [&rng] { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; };
  auto block_fixing_first = [&](bool proper_block) {
    // block-diag(1, R) with R in O(n-1) or SO(n-1); fixes e1.
    Mat R = Mat::Identity(n, n);
    if (n >= 2) {
      const GroupElement sub =
          random_group_element(proper_block ? Family::SO : Family::O, n - 1, rng, 1.0);
      R.bottomRightCorner(n - 1, n - 1) = sub.rotation;
    }
    return GroupElement(f, R, Vec::Zero(n));
  };
  switch (space.kind) {
    case PoseKind::EuclPoint: {
      // Stabilizer of the origin: the full rotation subgroup.
      const GroupElement rot = random_group_element(proper ? Family::SO : Family::O, n, rng, 1.0);
      return GroupElement(f, rot.rotation, Vec::Zero(n));
    }
    case PoseKind::PosOri2: {
      Mat R = Mat::Identity(2, 2);
      if (!proper && coin()) R(1, 1) = -1.0;  // O(1) = {diag(1,1), diag(1,-1)}
      return GroupElement(f, R, Vec::Zero(2));
    }
    case PoseKind::PosOri3:
    case PoseKind::Sphere2: return block_fixing_first(proper);
    case PoseKind::AffStiefel23:
    case PoseKind::Stiefel23: {
      Mat R = Mat::Identity(3, 3);
      if (!proper && coin()) R(2, 2) = -1.0;  // O(1) = {I, diag(1,1,-1)}
      return GroupElement(f, R, Vec::Zero(3));
    }
    case PoseKind::FullGroup: return GroupElement::identity(f, n);
  }
  throw UsageError("stabilizer_sample: unknown pose kind");
}

/// A second valid canonicalization map: h . rho(p) for random h in H.
/// Still sends p to the base point; used to exercise rho-independence.
inline GroupElement alternative_canonicalize(const PoseSpace& space, const Pose& p, Rng& rng) {
  return compose(stabilizer_sample(space, rng), canonicalize(space, p));
}

/// Full-measure random pose: translations uniform in [-2,2]^n, directions
/// from normalized Gaussians, 2-frames by Gram-Schmidt with near-parallel
/// pairs (threshold 1e-6) resampled.
inline Pose sample_pose(const PoseSpace& space, Rng& rng) {
  const int n = space.dim;
  auto direction = [&] { return UnitVec::normalized(gaussian_vec(n, rng)); };
  auto frame2 = [&] {
    while (true) {
      const Vec u = gaussian_vec(3, rng);
      const Vec w = gaussian_vec(3, rng);
      if (u.norm() < 1e-6) continue;
      const Vec a = u / u.norm();
      const Vec res = w - w.dot(a) * a;
      if (res.norm() < 1e-6) continue;
      return std::pair<UnitVec, UnitVec>(UnitVec(a), UnitVec(Vec(res / res.norm())));
    }
  };
  switch (space.kind) {
    case PoseKind::EuclPoint: return EuclPointPose{uniform_box_vec(n, 2.0, rng)};
    case PoseKind::PosOri2:
    case PoseKind::PosOri3: return PosOriPose{uniform_box_vec(n, 2.0, rng), direction()};
    case PoseKind::AffStiefel23: {
      auto [a, b] = frame2();
      return AffStiefelPose{uniform_box_vec(3, 2.0, rng), a, b};
    }
    case PoseKind::Stiefel23: {
      auto [a, b] = frame2();
      return StiefelPose{a, b};
    }
    case PoseKind::Sphere2: return SpherePose{UnitVec::normalized(gaussian_vec(3, rng))};
    case PoseKind::FullGroup: return GroupPose{random_group_element(space.family, n, rng, 2.0)};
  }
  throw UsageError("sample_pose: unknown pose kind");
}

/// Max coordinate deviation between two poses of the same kind.
inline double pose_distance(const Pose& p, const Pose& q) {
  if (p.index() != q.index()) throw UsageError("pose_distance: pose kind mismatch");
  if (const auto* a = std::get_if<EuclPointPose>(&p))
    return (a->point - std::get<EuclPointPose>(q).point).cwiseAbs().maxCoeff();
  if (const auto* a = std::get_if<PosOriPose>(&p)) {
    const auto& b = std::get<PosOriPose>(q);
    return std::max((a->position - b.position).cwiseAbs().maxCoeff(),
                    (a->direction.coords() - b.direction.coords()).cwiseAbs().maxCoeff());
  }
  if (const auto* a = std::get_if<AffStiefelPose>(&p)) {
    const auto& b = std::get<AffStiefelPose>(q);
    double d = (a->position - b.position).cwiseAbs().maxCoeff();
    d = std::max(d, (a->a.coords() - b.a.coords()).cwiseAbs().maxCoeff());
    return std::max(d, (a->b.coords() - b.b.coords()).cwiseAbs().maxCoeff());
  }
  if (const auto* a = std::get_if<StiefelPose>(&p)) {
    const auto& b = std::get<StiefelPose>(q);
    return std::max((a->a.coords() - b.a.coords()).cwiseAbs().maxCoeff(),
                    (a->b.coords() - b.b.coords()).cwiseAbs().maxCoeff());
  }
  if (const auto* a = std::get_if<SpherePose>(&p))
    return (a->point.coords() - std::get<SpherePose>(q).point.coords()).cwiseAbs().maxCoeff();
  if (const auto* a = std::get_if<GroupPose>(&p))
    return element_distance(a->element, std::get<GroupPose>(q).element);
  throw UsageError("pose_distance: unknown pose kind");
}

}  // namespace invlift
