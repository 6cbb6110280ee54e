#pragma once

#include "envs/environment.hpp"
#include "explain/explainer.hpp"
#include "replay/record.hpp"
#include "target/target_policy.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace emai::eval {

inline constexpr double kRrdGuard = 1e-6;

struct EvalConfig {
  std::size_t episodes = 500;
  std::uint64_t seed = 0;
  int workers = 1;
  std::size_t record_episodes = 0;  // replays captured for the first k modified episodes
};

struct RrdReport {
  std::string explainer_id;
  std::string env;
  std::size_t episodes = 0;
  double r_o = 0.0, r_e = 0.0, r_r = 0.0;
  double se_o = 0.0, se_e = 0.0, se_r = 0.0;
  double numerator = 0.0;    // |R_e - R_o|
  double denominator = 0.0;  // |R_r - R_o|
  std::optional<double> rrd;  // unset when the denominator is below the guard
  double rrd_se = 0.0;        // delta method on matched-seed differences
  std::vector<replay::EpisodeRecord> replays;
};

// Pure computation from per-episode matched-seed reward sums.
RrdReport rrd_from_rewards(std::span<const double> r_o, std::span<const double> r_e, std::span<const double> r_r);

// Three matched-seed batches: original, explainer-guided (the most critical
// agent's action is randomized every step) and random-guided.
RrdReport eval_fidelity(const explain::Explainer& explainer, const target::TargetPolicy& target,
                        const envs::Environment& env, const EvalConfig& cfg);

struct DeltaReport {
  std::string explainer_id;
  std::string env;
  std::size_t episodes = 0;
  double mean_original = 0.0;
  double mean_modified = 0.0;
  double mean_delta = 0.0;  // modified - original, matched seeds
  double se = 0.0;
  std::size_t modified_steps = 0;  // perturbed (attack) or replaced (patch) decisions
  std::vector<double> deltas;
  std::vector<replay::EpisodeRecord> replays;
};

// Uniform noise in [-eps, eps] on every observation component of the most
// critical agent (or all agents), clipped to [-1, 1], fed to target.act.
DeltaReport launch_attack(const explain::Explainer& explainer, const target::TargetPolicy& target,
                          const envs::Environment& env, double noise_eps, const EvalConfig& cfg,
                          bool attack_all = false);

struct PatchEntry {
  std::vector<double> obs;
  int action = 0;
  std::size_t agent = 0;
  int t = 0;
  std::size_t episode = 0;
};

struct PatchPackage {
  std::string explainer_id;
  std::string env;
  double quantile = 0.1;
  std::size_t obs_dim = 0;
  std::size_t harvest_episodes = 0;
  std::vector<std::size_t> kept_episodes;
  bool degenerate = false;  // all episode rewards equal; every episode kept
  std::vector<PatchEntry> entries;
};

nlohmann::json to_json(const PatchPackage& p);
PatchPackage patch_package_from_json(const nlohmann::json& j);

PatchPackage build_patch_package(const explain::Explainer& explainer, const target::TargetPolicy& target,
                                 const envs::Environment& env, std::size_t harvest_episodes, double quantile,
                                 const EvalConfig& cfg);

// Index of the entry nearest to obs in Manhattan distance (lowest index on
// ties) and that distance.
std::pair<std::size_t, double> nearest_entry(const PatchPackage& package, std::span<const double> obs);

// A match patches when its distance is below d_th, or is exactly zero.
bool within_threshold(double distance, double d_th);

DeltaReport apply_patch(const PatchPackage& package, const explain::Explainer& explainer,
                        const target::TargetPolicy& target, const envs::Environment& env, double d_th,
                        const EvalConfig& cfg);

// Episode counts used by build_patch_package for a given quantile.
std::size_t kept_count(std::size_t episodes, double quantile);

}  // namespace emai::eval
