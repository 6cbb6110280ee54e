#pragma once

#include "envs/environment.hpp"
#include "target/target_policy.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace emai::explain {

struct OracleResult {
  std::vector<double> importance;     // |masked mean - unmasked mean| per agent
  std::vector<double> stderrs;        // combined standard error per agent
  std::vector<double> masked_mean;    // mean remaining episode reward with agent i randomized
  double unmasked_mean = 0.0;
  int rollouts = 0;
};

// A replayable trajectory prefix: reset seed plus the joint actions taken.
struct Prefix {
  std::uint64_t reset_seed = 0;
  std::vector<std::vector<int>> joint_actions;
};

// Fresh copy of `proto` reset with the prefix seed and stepped through its actions.
std::unique_ptr<envs::Environment> replay_prefix(const envs::Environment& proto, const Prefix& prefix);

// From the state of `snapshot` (time t), for every agent i run K rollouts in
// which only agent i's actions are randomized until the episode ends, and K
// unmasked rollouts; returns are undiscounted remaining episode rewards.
// Rollout (i, k) draws from its own seed stream; aggregation is in index order.
OracleResult mc_counterfactual_oracle(const target::TargetPolicy& target, const envs::Environment& snapshot, int K,
                                      std::uint64_t seed, int workers = 1);

OracleResult mc_counterfactual_oracle(const target::TargetPolicy& target, const envs::Environment& proto,
                                      const Prefix& prefix, int K, std::uint64_t seed, int workers = 1);

}  // namespace emai::explain
