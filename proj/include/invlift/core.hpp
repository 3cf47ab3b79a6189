#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace invlift {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Caller passed structurally incompatible arguments (family/dimension
/// mismatch, unknown catalog key, bad arity).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Data violates a value-level constraint (non-unit direction,
/// non-orthogonal frame, non-finite coordinate).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Graded tolerances: construction-time validation, post-arithmetic checks,
// and action-level checks, at the coordinate scales used here
// (translations bounded by 2).
inline constexpr double kConstructTol = 1e-12;
inline constexpr double kOrthoTol = 1e-10;
inline constexpr double kActionTol = 1e-9;

inline bool all_finite(const Vec& v) { return v.allFinite(); }

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent RNG stream for trial `index` of a run seeded with `master`.
/// Trials seeded this way give the same results regardless of the order or
/// schedule in which they run.
inline Rng trial_rng(uint64_t master, uint64_t index) {
  return Rng(splitmix64(master ^ splitmix64(index + 1)));
}

inline Vec gaussian_vec(int n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = gauss(rng);
  return v;
}

inline Vec uniform_box_vec(int n, double bound, Rng& rng) {
  std::uniform_real_distribution<double> uni(-bound, bound);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = uni(rng);
  return v;
}

}  // namespace invlift
