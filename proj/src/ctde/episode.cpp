#include "ctde/episode.hpp"

#include "common/error.hpp"

namespace emai::ctde {

EpisodeBuilder::EpisodeBuilder(std::size_t n_agents, std::size_t obs_dim, std::size_t state_dim) {
  ep_.n_agents = n_agents;
  ep_.obs_dim = obs_dim;
  ep_.state_dim = state_dim;
}

void EpisodeBuilder::push_obs(const std::vector<std::vector<double>>& observations) {
  require(observations.size() == ep_.n_agents, ErrorCode::kInvalidArgument,
          "episode builder: wrong number of observations");
  for (const auto& o : observations) {
    require(o.size() == ep_.obs_dim, ErrorCode::kInvalidArgument,
            "episode builder: observation length mismatch");
    ep_.obs.insert(ep_.obs.end(), o.begin(), o.end());
  }
}

void EpisodeBuilder::begin(const std::vector<std::vector<double>>& observations,
                           std::span<const double> state) {
  const std::size_t n = ep_.n_agents, d = ep_.obs_dim, s = ep_.state_dim;
  ep_ = Episode{};
  ep_.n_agents = n;
  ep_.obs_dim = d;
  ep_.state_dim = s;
  push_obs(observations);
  require(state.size() == s, ErrorCode::kInvalidArgument, "episode builder: state length mismatch");
  ep_.states.insert(ep_.states.end(), state.begin(), state.end());
  started_ = true;
}

void EpisodeBuilder::add(std::span<const int> actions, double reward, double bonus,
                         const std::vector<std::vector<double>>& next_observations,
                         std::span<const double> next_state, bool terminal) {
  require(started_, ErrorCode::kInvalidArgument, "episode builder: add() before begin()");
  require(actions.size() == ep_.n_agents, ErrorCode::kInvalidArgument,
          "episode builder: wrong number of actions");
  require(next_state.size() == ep_.state_dim, ErrorCode::kInvalidArgument,
          "episode builder: state length mismatch");
  ep_.actions.insert(ep_.actions.end(), actions.begin(), actions.end());
  ep_.rewards.push_back(reward);
  ep_.bonus.push_back(bonus);
  ep_.terminal.push_back(terminal ? 1 : 0);
  push_obs(next_observations);
  ep_.states.insert(ep_.states.end(), next_state.begin(), next_state.end());
  ++ep_.steps;
}

Episode EpisodeBuilder::finish() {
  require(started_, ErrorCode::kInvalidArgument, "episode builder: finish() before begin()");
  started_ = false;
  return std::move(ep_);
}

}  // namespace emai::ctde
