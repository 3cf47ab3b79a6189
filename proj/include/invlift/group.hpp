#pragma once

#include <string>
#include <utility>

#include "invlift/core.hpp"

namespace invlift {

/// The supported matrix isometry groups: O(n), SO(n) acting linearly, and
/// E(n), SE(n) acting affinely, for n in {1, 2, 3}.
enum class Family { O, SO, E, SE };

inline bool has_translation(Family f) { return f == Family::E || f == Family::SE; }

/// SO/SE elements must have det(R) = +1.
inline bool is_proper(Family f) { return f == Family::SO || f == Family::SE; }

inline std::string family_name(Family f) {
  switch (f) {
    case Family::O: return "O";
    case Family::SO: return "SO";
    case Family::E: return "E";
    case Family::SE: return "SE";
  }
  return "?";
}

/// Unit vector in R^n, validated to kOrthoTol at construction.
class UnitVec {
 public:
  explicit UnitVec(Vec coords) : coords_(std::move(coords)) {
    if (!all_finite(coords_)) throw ValidationError("UnitVec: non-finite coordinates");
    if (std::abs(coords_.norm() - 1.0) > kOrthoTol)
      throw ValidationError("UnitVec: norm deviates from 1 by more than 1e-10");
  }

  /// Normalizes an arbitrary nonzero vector.
  static UnitVec normalized(const Vec& v) {
    const double n = v.norm();
    if (!(n > 1e-14)) throw ValidationError("UnitVec: cannot normalize near-zero vector");
    return UnitVec(Vec(v / n));
  }

  const Vec& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  double operator()(int i) const { return coords_(i); }

 private:
  Vec coords_;
};

/// An isometry (R, t) acting as x -> R x + t. For the linear families O and
/// SO the translation is identically zero. Composition law:
/// (t, R)(t', R') = (t + R t', R R').
struct GroupElement {
  Family family;
  int dim;
  Mat rotation;
  Vec translation;

  GroupElement(Family f, Mat R, Vec t)
      : family(f), dim(static_cast<int>(R.rows())), rotation(std::move(R)), translation(std::move(t)) {
    if (dim < 1 || dim > 3 || rotation.cols() != dim)
      throw UsageError("GroupElement: rotation must be square with n in {1,2,3}");
    if (translation.size() != dim)
      throw UsageError("GroupElement: translation length must match dimension");
    if (!rotation.allFinite() || !all_finite(translation))
      throw ValidationError("GroupElement: non-finite entries");
    const double ortho = (rotation.transpose() * rotation - Mat::Identity(dim, dim))
                             .cwiseAbs()
                             .maxCoeff();
    if (ortho > kConstructTol)
      throw ValidationError("GroupElement: rotation not orthogonal within 1e-12");
    const double det = rotation.determinant();
    if (std::abs(std::abs(det) - 1.0) > kConstructTol)
      throw ValidationError("GroupElement: |det| deviates from 1");
    if (is_proper(family) && det < 0.0)
      throw ValidationError("GroupElement: det must be +1 for " + family_name(family));
    if (!has_translation(family) && translation.cwiseAbs().maxCoeff() != 0.0)
      throw ValidationError("GroupElement: translation must be zero for " + family_name(family));
  }

  static GroupElement identity(Family f, int n) {
    return GroupElement(f, Mat::Identity(n, n), Vec::Zero(n));
  }

  static GroupElement rotation_only(Family f, const Mat& R) {
    return GroupElement(f, R, Vec::Zero(R.rows()));
  }
};

inline GroupElement compose(const GroupElement& g, const GroupElement& h) {
  if (g.family != h.family || g.dim != h.dim)
    throw UsageError("compose: family/dimension mismatch");
  return GroupElement(g.family, g.rotation * h.rotation,
                      g.translation + g.rotation * h.translation);
}

inline GroupElement inverse(const GroupElement& g) {
  Mat Rt = g.rotation.transpose();
  return GroupElement(g.family, Rt, Vec(-(Rt * g.translation)));
}

inline Vec act_point(const GroupElement& g, const Vec& x) {
  if (x.size() != g.dim) throw UsageError("act_point: dimension mismatch");
  return g.rotation * x + g.translation;
}

/// Directions see only the rotation part; translations are discarded.
inline UnitVec act_direction(const GroupElement& g, const UnitVec& d) {
  if (d.dim() != g.dim) throw UsageError("act_direction: dimension mismatch");
  return UnitVec(Vec(g.rotation * d.coords()));
}

/// Completes a unit direction alpha in R^3 to a rotation A = [alpha|beta|alpha x beta].
/// beta is chosen deterministically: the first of (e2, e3, e1) with
/// |<alpha, c>| <= 0.9 is projected orthogonal to alpha and normalized.
inline GroupElement frame_from_direction(const UnitVec& alpha) {
  if (alpha.dim() != 3) throw UsageError("frame_from_direction: expects R^3");
  const Eigen::Vector3d a = Eigen::Vector3d(alpha.coords()).normalized();
  const Eigen::Vector3d candidates[3] = {Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ(),
                                         Eigen::Vector3d::UnitX()};
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  for (const auto& c : candidates) {
    if (std::abs(a.dot(c)) <= 0.9) {
      b = (c - a.dot(c) * a).normalized();
      break;
    }
  }
  Mat A(3, 3);
  A.col(0) = a;
  A.col(1) = b;
  A.col(2) = a.cross(b);
  return GroupElement::rotation_only(Family::SO, A);
}

/// Rotation [alpha|beta|alpha x beta] from an orthonormal 2-frame.
inline GroupElement frame_from_2frame(const UnitVec& alpha, const UnitVec& beta) {
  if (alpha.dim() != 3 || beta.dim() != 3) throw UsageError("frame_from_2frame: expects R^3");
  if (std::abs(alpha.coords().dot(beta.coords())) > kOrthoTol)
    throw ValidationError("frame_from_2frame: input frame not orthonormal");
  const Eigen::Vector3d a = Eigen::Vector3d(alpha.coords()).normalized();
  const Eigen::Vector3d b = (Eigen::Vector3d(beta.coords()) - a.dot(beta.coords()) * a).normalized();
  Mat A(3, 3);
  A.col(0) = a;
  A.col(1) = b;
  A.col(2) = a.cross(b);
  return GroupElement::rotation_only(Family::SO, A);
}

/// Planar rotation with first column alpha: [[a1, -a2], [a2, a1]].
inline GroupElement frame_from_direction_2d(const UnitVec& alpha) {
  if (alpha.dim() != 2) throw UsageError("frame_from_direction_2d: expects R^2");
  const Eigen::Vector2d a = Eigen::Vector2d(alpha.coords()).normalized();
  Mat A(2, 2);
  A << a(0), -a(1), a(1), a(0);
  return GroupElement::rotation_only(Family::SO, A);
}

/// Near-Haar rotation sampling: QR of a Gaussian matrix with each Q column
/// sign-fixed by the corresponding R diagonal entry; for SO/SE the last
/// column is negated when det = -1. Translations uniform in [-bound, bound]^n.
inline GroupElement random_group_element(Family family, int dim, Rng& rng,
                                         double translation_bound = 2.0) {
  if (dim < 1 || dim > 3) throw UsageError("random_group_element: n must be in {1,2,3}");
  if (has_translation(family) && !(translation_bound > 0.0))
    throw UsageError("random_group_element: translation_bound must be positive");
  Mat gauss(dim, dim);
  for (int i = 0; i < dim; ++i) gauss.row(i) = gaussian_vec(dim, rng).transpose();
  Eigen::HouseholderQR<Mat> qr(gauss);
  Mat Q = qr.householderQ();
  const Vec diag = qr.matrixQR().diagonal();
  for (int j = 0; j < dim; ++j)
    if (diag(j) < 0.0) Q.col(j) *= -1.0;
  if (is_proper(family) && Q.determinant() < 0.0) Q.col(dim - 1) *= -1.0;
  Vec t = has_translation(family) ? uniform_box_vec(dim, translation_bound, rng) : Vec::Zero(dim);
  return GroupElement(family, std::move(Q), std::move(t));
}

/// Max deviation across rotation and translation parts.
inline double element_distance(const GroupElement& g, const GroupElement& h) {
  double d = (g.rotation - h.rotation).cwiseAbs().maxCoeff();
  if (g.translation.size() > 0)
    d = std::max(d, (g.translation - h.translation).cwiseAbs().maxCoeff());
  return d;
}

}  // namespace invlift
