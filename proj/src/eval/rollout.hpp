#pragma once

#include "envs/environment.hpp"
#include "replay/record.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace emai::eval {

struct StepDecision {
  std::vector<int> target_actions;
  std::optional<std::vector<int>> mask;
  std::vector<int> final_actions;
  std::vector<double> importance;  // empty: recorded as zeros
};

// Chooses the joint action for the environment's current step.
using DecideFn = std::function<StepDecision(const envs::Environment& env, const envs::Observations& obs)>;

struct RecordInfo {
  std::string target_id;
  std::string explainer_id;
};

struct EpisodeResult {
  double reward_sum = 0.0;  // undiscounted
  std::optional<replay::EpisodeRecord> record;
};

// Resets a private copy of `proto` with `reset_seed` and runs it to the end.
EpisodeResult run_episode(const envs::Environment& proto, std::uint64_t reset_seed, const DecideFn& decide,
                          const RecordInfo* record = nullptr);

}  // namespace emai::eval
