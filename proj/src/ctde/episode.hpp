#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emai::ctde {

// One whole episode in flat row-major storage. Step t covers the transition
// from observation/state index t to t + 1, so there are steps + 1 of each.
struct Episode {
  std::size_t n_agents = 0;
  std::size_t obs_dim = 0;
  std::size_t state_dim = 0;
  std::size_t steps = 0;

  std::vector<double> obs;        // (steps + 1) x n_agents x obs_dim
  std::vector<double> states;     // (steps + 1) x state_dim
  std::vector<int> actions;       // steps x n_agents
  std::vector<double> rewards;    // steps; the reward the learner trains on
  std::vector<double> bonus;      // steps; the masking-reward share of rewards (0 when unused)
  std::vector<char> terminal;     // steps

  std::span<const double> obs_at(std::size_t t, std::size_t agent) const {
    return {obs.data() + (t * n_agents + agent) * obs_dim, obs_dim};
  }
  std::span<const double> state_at(std::size_t t) const {
    return {states.data() + t * state_dim, state_dim};
  }
  std::span<const int> actions_at(std::size_t t) const {
    return {actions.data() + t * n_agents, n_agents};
  }
};

class EpisodeBuilder {
 public:
  EpisodeBuilder(std::size_t n_agents, std::size_t obs_dim, std::size_t state_dim);

  void begin(const std::vector<std::vector<double>>& observations, std::span<const double> state);
  void add(std::span<const int> actions, double reward, double bonus,
           const std::vector<std::vector<double>>& next_observations,
           std::span<const double> next_state, bool terminal);

  Episode finish();

 private:
  void push_obs(const std::vector<std::vector<double>>& observations);
  Episode ep_;
  bool started_ = false;
};

}  // namespace emai::ctde
