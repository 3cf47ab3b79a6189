#pragma once

#include <string>
#include <vector>

#include "invlift/io.hpp"

namespace invlift {

struct VerifyOptions {
  std::string suite;
  std::string config_key = "all";  // "all" or one catalog key
  uint64_t seed = 0;
  int trials = 1000;
  std::optional<double> tolerance;  // suite-specific default when absent
};

namespace detail {

inline std::vector<const CatalogEntry*> selected_entries(const std::string& config_key) {
  std::vector<const CatalogEntry*> out;
  if (config_key == "all") {
    for (const CatalogEntry& e : catalog()) out.push_back(&e);
  } else {
    out.push_back(&catalog_entry(config_key));
  }
  return out;
}

/// Worst base-point error of the canonicalizer over random poses.
inline double canonicalizer_error(const PoseSpace& space, uint64_t seed, int trials) {
  const Pose base = base_point(space);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    Rng rng = trial_rng(seed, i);
    const Pose p = sample_pose(space, rng);
    worst = std::max(worst, pose_distance(act_pose(canonicalize(space, p), p), base));
  }
  return worst;
}

/// Worst deviation between lifting through the canonical map and through a
/// randomly H-shifted alternative.
inline double rho_independence_error(const Configuration& config, uint64_t seed, int trials) {
  const PoseSpace space = config.pose_space();
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    Rng rng = trial_rng(seed, i);
    const Vec s = sample_ambient_input(config, rng);
    const Vec r = sample_ambient_input(config, rng);
    const Pose p = sample_pose(space, rng);
    const FeatureVector f1 = catalog_eval_with(config, s, r, canonicalize(space, p));
    const FeatureVector f2 = catalog_eval_with(config, s, r, alternative_canonicalize(space, p, rng));
    worst = std::max(worst, max_abs_difference(f1, f2));
  }
  return worst;
}

struct CrossReductionSummary {
  double max_disagreement = 0.0;
};

inline CrossReductionSummary cross_reduction_sweep(Family family, int dim, uint64_t seed,
                                                   int trials) {
  const PointKernel probe = cross_reduction_probe_kernel();
  CrossReductionSummary summary;
  for (int i = 0; i < trials; ++i) {
    Rng rng = trial_rng(seed, i);
    std::vector<Vec> xs{uniform_box_vec(dim, 2.0, rng), uniform_box_vec(dim, 2.0, rng)};
    const Vec p = uniform_box_vec(dim, 2.0, rng);
    const GroupElement q = random_group_element(family, dim, rng, 2.0);
    const CrossReductionResult result = cross_reduction_check(family, dim, xs, p, q, probe);
    summary.max_disagreement = std::max(summary.max_disagreement, result.disagreement());
  }
  return summary;
}

struct ChainSummary {
  double max_residue = 0.0;
  double max_witness_residual = 0.0;
  bool oracle_all_same = true;
};

inline AugmentedCloud chain_cloud(const Vec& x, const UnitVec& d, const UnitVec& c) {
  AugmentedCloud cloud;
  cloud.points = {x, x + d.coords(), x + c.coords()};
  cloud.labels = {"x", "x+d", "x+c"};
  return cloud;
}

inline ChainSummary chain_sweep(uint64_t seed, int trials) {
  ChainSummary summary;
  std::optional<AugmentedCloud> previous;
  for (int i = 0; i < trials; ++i) {
    Rng rng = trial_rng(seed, i);
    const auto [x, d, c] = sample_chain_flag(rng);
    summary.max_residue = std::max(summary.max_residue, iterated_chain_SE3(x, d, c).deviation());
    // All valid flags lie in one SE(3) orbit; the oracle must agree.
    AugmentedCloud cloud = chain_cloud(x, d, c);
    if (previous) {
      const OrbitVerdict verdict = same_orbit(Family::SE, *previous, cloud);
      summary.oracle_all_same = summary.oracle_all_same && verdict.same_orbit;
      if (verdict.same_orbit)
        summary.max_witness_residual = std::max(summary.max_witness_residual, verdict.residual);
    }
    previous = std::move(cloud);
  }
  return summary;
}

}  // namespace detail

/// Runs one verification suite and renders a JSON report. `pass` reflects
/// whether every threshold was met.
inline Json run_verify(const VerifyOptions& opt, bool& pass) {
  pass = true;
  Json results = Json::array();
  Json failures = Json::array();
  auto record_failure = [&](const std::string& where, double measured, double threshold) {
    pass = false;
    failures.push_back(Json{{"config", where}, {"measured", measured}, {"threshold", threshold}});
  };

  Json report{{"suite", opt.suite}, {"seed", opt.seed}, {"trials", opt.trials}};

  if (opt.suite == "invariance") {
    const double tol = opt.tolerance.value_or(1e-9);
    report["tolerance"] = tol;
    for (const CatalogEntry* e : detail::selected_entries(opt.config_key)) {
      const InvarianceReport r = invariance_trial(e->config, opt.seed, opt.trials);
      const bool ok = r.max_deviation <= tol;
      if (!ok) record_failure(e->config.key(), r.max_deviation, tol);
      results.push_back(Json{{"config", e->config.key()},
                             {"max_deviation", r.max_deviation},
                             {"pass", ok}});
    }
  } else if (opt.suite == "separation") {
    const double tol = opt.tolerance.value_or(1e-7);
    report["tolerance"] = tol;
    auto tally_json = [](const PopulationTally& t) {
      return Json{{"pairs", t.pairs},
                  {"invariants_equal", t.invariants_equal},
                  {"oracle_same", t.oracle_same},
                  {"false_merges", t.false_merges},
                  {"false_splits", t.false_splits}};
    };
    for (const CatalogEntry* e : detail::selected_entries(opt.config_key)) {
      const SeparationReport r = separation_trial(e->config, opt.seed, opt.trials, tol);
      const bool ok = r.false_merges() == 0 && r.false_splits() == 0;
      if (!ok)
        record_failure(e->config.key(), static_cast<double>(r.false_merges() + r.false_splits()),
                       0.0);
      results.push_back(Json{{"config", e->config.key()},
                             {"pairs_per_population", r.pairs_per_population},
                             {"orbit_equal", tally_json(r.orbit_equal)},
                             {"independent", tally_json(r.independent)},
                             {"perturbed", tally_json(r.perturbed)},
                             {"agreements", r.agreements()},
                             {"false_merges", r.false_merges()},
                             {"false_splits", r.false_splits()},
                             {"pass", ok}});
    }
  } else if (opt.suite == "canonicalizer") {
    const double base_tol = opt.tolerance.value_or(1e-10);
    const double rho_tol = opt.tolerance.value_or(1e-9);
    report["tolerance"] = base_tol;
    for (const CatalogEntry* e : detail::selected_entries(opt.config_key)) {
      const PoseSpace space = e->config.pose_space();
      const double base_err = detail::canonicalizer_error(space, opt.seed, opt.trials);
      bool ok = base_err <= base_tol;
      Json one{{"config", e->config.key()},
               {"pose_space", space.name()},
               {"max_base_point_error", base_err}};
      if (e->route != EvalRoute::Direct) {
        const double rho_err = detail::rho_independence_error(e->config, opt.seed, opt.trials);
        one["max_rho_independence_deviation"] = rho_err;
        ok = ok && rho_err <= rho_tol;
        if (rho_err > rho_tol) record_failure(e->config.key() + " (rho)", rho_err, rho_tol);
      }
      if (base_err > base_tol) record_failure(e->config.key(), base_err, base_tol);
      one["pass"] = ok;
      results.push_back(std::move(one));
    }
  } else if (opt.suite == "cross-reduction") {
    const double tol = opt.tolerance.value_or(1e-9);
    report["tolerance"] = tol;
    for (int dim : {2, 3}) {
      const auto summary = detail::cross_reduction_sweep(Family::SE, dim, opt.seed, opt.trials);
      const std::string name = "SE" + std::to_string(dim);
      const bool ok = summary.max_disagreement <= tol;
      if (!ok) record_failure(name, summary.max_disagreement, tol);
      results.push_back(
          Json{{"family", name}, {"max_disagreement", summary.max_disagreement}, {"pass", ok}});
    }
  } else if (opt.suite == "chain") {
    const double tol = opt.tolerance.value_or(1e-9);
    report["tolerance"] = tol;
    const auto summary = detail::chain_sweep(opt.seed, opt.trials);
    const bool ok =
        summary.max_residue <= tol && summary.oracle_all_same && summary.max_witness_residual <= kWitnessTol;
    if (!ok) record_failure("chain", summary.max_residue, tol);
    results.push_back(Json{{"max_residue", summary.max_residue},
                           {"oracle_all_same_orbit", summary.oracle_all_same},
                           {"max_witness_residual", summary.max_witness_residual},
                           {"pass", ok}});
  } else {
    throw UsageError("unknown suite '" + opt.suite +
                     "'; expected invariance|separation|canonicalizer|cross-reduction|chain");
  }

  report["results"] = std::move(results);
  report["failures"] = std::move(failures);
  report["pass"] = pass;
  return report;
}

}  // namespace invlift
