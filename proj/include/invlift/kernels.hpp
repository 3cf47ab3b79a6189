#pragma once

#include <string>
#include <vector>

#include "invlift/group.hpp"

namespace invlift {

/// Ordered invariant values with matching human-readable labels.
struct FeatureVector {
  std::vector<std::string> labels;
  Vec values;
};

inline double max_abs_difference(const FeatureVector& a, const FeatureVector& b) {
  if (a.values.size() != b.values.size())
    throw UsageError("max_abs_difference: feature length mismatch");
  return (a.values - b.values).cwiseAbs().maxCoeff();
}

namespace detail {

inline void check_common_dim(std::initializer_list<const Vec*> vs, int d, const char* who) {
  for (const Vec* v : vs)
    if (v->size() != d) throw UsageError(std::string(who) + ": dimension mismatch");
}

inline void check_unit(const Vec& v, const char* who) {
  if (std::abs(v.norm() - 1.0) > kOrthoTol)
    throw ValidationError(std::string(who) + ": input not on the unit sphere");
}

inline double det2(const Vec& a, const Vec& b) { return a(0) * b(1) - a(1) * b(0); }

inline double det3(const Vec& a, const Vec& b, const Vec& c) {
  Eigen::Matrix3d m;
  m << a, b, c;
  return m.determinant();
}

}  // namespace detail

/// O(d) generators on a point tuple: all squared norms |x_i|^2, then all
/// squared distances |x_i - x_j|^2 with (i, j) lexicographic.
inline FeatureVector weyl_O(int d, const std::vector<Vec>& points) {
  if (d < 1 || d > 3) throw UsageError("weyl_O: d must be in {1,2,3}");
  if (points.empty()) throw UsageError("weyl_O: need at least one point");
  const int m = static_cast<int>(points.size());
  for (const Vec& x : points)
    if (x.size() != d) throw UsageError("weyl_O: dimension mismatch");
  FeatureVector out;
  out.values.resize(m + m * (m - 1) / 2);
  int k = 0;
  for (int i = 0; i < m; ++i) {
    out.labels.push_back("|x" + std::to_string(i + 1) + "|^2");
    out.values(k++) = points[i].squaredNorm();
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      out.labels.push_back("|x" + std::to_string(i + 1) + "-x" + std::to_string(j + 1) + "|^2");
      out.values(k++) = (points[i] - points[j]).squaredNorm();
    }
  return out;
}

/// SO(d) generators: the O(d) set followed by det(x_{i1}, ..., x_{id}) over
/// all d-subsets in lexicographic index order (empty when m < d).
inline FeatureVector weyl_SO(int d, const std::vector<Vec>& points) {
  FeatureVector out = weyl_O(d, points);
  const int m = static_cast<int>(points.size());
  std::vector<double> dets;
  std::vector<std::string> labels;
  auto tag = [](std::initializer_list<int> idx) {
    std::string s = "det(";
    bool first = true;
    for (int i : idx) {
      if (!first) s += ",";
      s += "x" + std::to_string(i + 1);
      first = false;
    }
    return s + ")";
  };
  if (d == 1) {
    for (int i = 0; i < m; ++i) {
      dets.push_back(points[i](0));
      labels.push_back(tag({i}));
    }
  } else if (d == 2) {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        dets.push_back(detail::det2(points[i], points[j]));
        labels.push_back(tag({i, j}));
      }
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
          dets.push_back(detail::det3(points[i], points[j], points[k]));
          labels.push_back(tag({i, j, k}));
        }
  }
  const int base = static_cast<int>(out.values.size());
  out.values.conservativeResize(base + static_cast<int>(dets.size()));
  for (size_t i = 0; i < dets.size(); ++i) {
    out.values(base + static_cast<int>(i)) = dets[i];
    out.labels.push_back(labels[i]);
  }
  return out;
}

// Stabilizer-subgroup kernels. Each is invariant under the block subgroup
// named in its identifier, acting on the trailing coordinates.

/// O(1) acting on the second coordinate of R^2 pairs.
inline FeatureVector stab_O1_in_E2(const Vec& s, const Vec& r) {
  detail::check_common_dim({&s, &r}, 2, "stab_O1_in_E2");
  FeatureVector out;
  out.labels = {"s_1", "r_1", "|s_2|^2", "|r_2|^2", "|s_2-r_2|^2"};
  out.values.resize(5);
  out.values << s(0), r(0), s(1) * s(1), r(1) * r(1), (s(1) - r(1)) * (s(1) - r(1));
  return out;
}

/// O(2) acting on coordinates (2,3) of R^3 pairs.
inline FeatureVector stab_O2_in_E3(const Vec& s, const Vec& r) {
  detail::check_common_dim({&s, &r}, 3, "stab_O2_in_E3");
  const Eigen::Vector2d st(s(1), s(2)), rt(r(1), r(2));
  FeatureVector out;
  out.labels = {"s_1", "r_1", "|(s_2,s_3)|^2", "|(r_2,r_3)|^2", "|(s_2-r_2,s_3-r_3)|^2"};
  out.values.resize(5);
  out.values << s(0), r(0), st.squaredNorm(), rt.squaredNorm(), (st - rt).squaredNorm();
  return out;
}

/// SO(2) acting on coordinates (2,3): the O(2) set plus the 2x2 determinant
/// of the coordinate tails.
inline FeatureVector stab_SO2_in_SE3(const Vec& s, const Vec& r) {
  FeatureVector out = stab_O2_in_E3(s, r);
  out.labels.push_back("det((s_2,s_3),(r_2,r_3))");
  out.values.conservativeResize(6);
  out.values(5) = s(1) * r(2) - s(2) * r(1);
  return out;
}

/// O(1) acting on the third coordinate of R^3 pairs.
inline FeatureVector stab_O1_in_E3(const Vec& s, const Vec& r) {
  detail::check_common_dim({&s, &r}, 3, "stab_O1_in_E3");
  FeatureVector out;
  out.labels = {"s_1", "r_1", "s_2", "r_2", "|s_3|^2", "|r_3|^2", "|s_3-r_3|^2"};
  out.values.resize(7);
  out.values << s(0), r(0), s(1), r(1), s(2) * s(2), r(2) * r(2), (s(2) - r(2)) * (s(2) - r(2));
  return out;
}

/// Minimal O(1)-separating set on S^2 x S^2; the sphere constraint makes the
/// squared third coordinates redundant, leaving the product s_3 r_3.
inline FeatureVector sphere_O1_minimal(const Vec& s, const Vec& r) {
  detail::check_common_dim({&s, &r}, 3, "sphere_O1_minimal");
  detail::check_unit(s, "sphere_O1_minimal");
  detail::check_unit(r, "sphere_O1_minimal");
  FeatureVector out;
  out.labels = {"s_1", "s_2", "r_1", "r_2", "s_3*r_3"};
  out.values.resize(5);
  out.values << s(0), s(1), r(0), r(1), s(2) * r(2);
  return out;
}

/// Squared distances of the triangle (s, r, p).
inline FeatureVector euclid_triple_E(const Vec& s, const Vec& r, const Vec& p) {
  const int d = static_cast<int>(s.size());
  detail::check_common_dim({&s, &r, &p}, d, "euclid_triple_E");
  FeatureVector out;
  out.labels = {"|s-r|^2", "|s-p|^2", "|r-p|^2"};
  out.values.resize(3);
  out.values << (s - r).squaredNorm(), (s - p).squaredNorm(), (r - p).squaredNorm();
  return out;
}

/// Triangle distances plus the signed area term det(s-p, r-p).
inline FeatureVector euclid_triple_SE2(const Vec& s, const Vec& r, const Vec& p) {
  detail::check_common_dim({&s, &r, &p}, 2, "euclid_triple_SE2");
  FeatureVector out = euclid_triple_E(s, r, p);
  out.labels.push_back("det(s-p,r-p)");
  out.values.conservativeResize(4);
  out.values(3) = detail::det2(Vec(s - p), Vec(r - p));
  return out;
}

/// Chordal distances on S^2 plus det(s, r, p).
inline FeatureVector sphere_triple_SO3(const Vec& s, const Vec& r, const Vec& p) {
  detail::check_common_dim({&s, &r, &p}, 3, "sphere_triple_SO3");
  detail::check_unit(s, "sphere_triple_SO3");
  detail::check_unit(r, "sphere_triple_SO3");
  detail::check_unit(p, "sphere_triple_SO3");
  FeatureVector out = euclid_triple_E(s, r, p);
  out.labels.push_back("det(s,r,p)");
  out.values.conservativeResize(4);
  out.values(3) = detail::det3(s, r, p);
  return out;
}

}  // namespace invlift
