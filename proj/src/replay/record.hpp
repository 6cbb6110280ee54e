#pragma once

#include "envs/environment.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace emai::replay {

inline constexpr int kReplayVersion = 1;

struct Header {
  int v = kReplayVersion;
  std::string env;
  std::uint64_t seed = 0;
  std::string target_id;
  std::string explainer_id;
  std::size_t n_agents = 0;
  int width = 0;
  int height = 0;
  std::size_t steps = 0;
  double reward_sum = 0.0;  // must equal the sum of step rewards

  bool operator==(const Header&) const = default;
};

struct StepRecord {
  int t = 0;
  std::vector<envs::Cell> agents;
  std::vector<envs::Cell> landmarks;
  std::vector<envs::Cell> walls;
  std::optional<bool> door_open;
  std::vector<double> state;
  std::vector<std::vector<double>> observations;
  std::vector<int> target_actions;
  std::optional<std::vector<int>> mask_actions;
  std::vector<int> final_actions;
  double reward = 0.0;
  std::vector<double> importance;

  bool operator==(const StepRecord&) const = default;
};

struct EpisodeRecord {
  Header header;
  std::vector<StepRecord> steps;

  bool operator==(const EpisodeRecord&) const = default;
};

// Fills t, layout, state and observations from the environment before it steps.
StepRecord capture(const envs::Environment& env);

// Collects one episode from its first step. Steps must arrive contiguously
// from t = 0 with per-agent vectors of length n_agents.
class Recorder {
 public:
  Recorder(const envs::Environment& env, std::uint64_t seed, std::string target_id, std::string explainer_id);

  void push(StepRecord step);
  std::size_t size() const { return record_.steps.size(); }
  EpisodeRecord finish();

 private:
  EpisodeRecord record_;
  bool finished_ = false;
};

// Rounds every real field to 9 significant digits, the serialized precision.
EpisodeRecord rounded(EpisodeRecord record);
double round9(double v);

}  // namespace emai::replay
