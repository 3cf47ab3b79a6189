#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "invlift/invlift.hpp"

namespace testutil {

using invlift::Mat;
using invlift::Vec;

inline Vec v1(double x) {
  Vec v(1);
  v << x;
  return v;
}

inline Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

inline Mat rot2(double angle) {
  Mat R(2, 2);
  R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return R;
}

/// Exact 90-degree rotation, no trig roundoff.
inline Mat rot90() {
  Mat R(2, 2);
  R << 0.0, -1.0, 1.0, 0.0;
  return R;
}

inline double max_abs(const Vec& v) { return v.cwiseAbs().maxCoeff(); }

inline void check_close(const Vec& actual, const Vec& expected, double tol) {
  REQUIRE(actual.size() == expected.size());
  CHECK(max_abs(actual - expected) <= tol);
}

inline void check_features(const invlift::FeatureVector& fv, std::initializer_list<double> expected,
                           double tol = 1e-12) {
  REQUIRE(fv.values.size() == static_cast<int>(expected.size()));
  REQUIRE(fv.labels.size() == expected.size());
  int i = 0;
  for (double e : expected) {
    INFO("entry " << i << " (" << fv.labels[i] << ")");
    CHECK(std::abs(fv.values(i) - e) <= tol);
    ++i;
  }
}

}  // namespace testutil
