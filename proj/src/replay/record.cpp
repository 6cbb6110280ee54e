#include "replay/record.hpp"

#include "common/error.hpp"

#include <cstdio>
#include <cstdlib>

namespace emai::replay {

StepRecord capture(const envs::Environment& env) {
  StepRecord s;
  s.t = env.time();
  const auto summary = env.summary();
  s.agents = summary.agents;
  s.landmarks = summary.landmarks;
  s.walls = summary.walls;
  s.door_open = summary.door_open;
  s.state = env.state();
  s.observations = env.observations();
  return s;
}

Recorder::Recorder(const envs::Environment& env, std::uint64_t seed, std::string target_id,
                   std::string explainer_id) {
  require(env.time() == 0, ErrorCode::kInvalidArgument,
          "recorder: stream starts mid-episode at t=" + std::to_string(env.time()));
  auto& h = record_.header;
  h.env = env.name();
  h.seed = seed;
  h.target_id = std::move(target_id);
  h.explainer_id = std::move(explainer_id);
  h.n_agents = env.spec().n_agents;
  const auto summary = env.summary();
  h.width = summary.width;
  h.height = summary.height;
}

void Recorder::push(StepRecord step) {
  require(!finished_, ErrorCode::kInvalidArgument, "recorder: episode already finished");
  const std::size_t n = record_.header.n_agents;
  require(step.t == static_cast<int>(record_.steps.size()), ErrorCode::kInvalidArgument,
          "recorder: expected step t=" + std::to_string(record_.steps.size()) + ", got t=" + std::to_string(step.t));
  require(step.agents.size() == n && step.observations.size() == n && step.target_actions.size() == n &&
              step.final_actions.size() == n && step.importance.size() == n &&
              (!step.mask_actions || step.mask_actions->size() == n),
          ErrorCode::kInvalidArgument, "recorder: per-agent vectors must have length n_agents");
  record_.header.reward_sum += step.reward;
  record_.steps.push_back(std::move(step));
}

EpisodeRecord Recorder::finish() {
  require(!finished_, ErrorCode::kInvalidArgument, "recorder: episode already finished");
  finished_ = true;
  record_.header.steps = record_.steps.size();
  return std::move(record_);
}

double round9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

EpisodeRecord rounded(EpisodeRecord r) {
  r.header.reward_sum = round9(r.header.reward_sum);
  for (auto& s : r.steps) {
    s.reward = round9(s.reward);
    for (auto& x : s.state) x = round9(x);
    for (auto& x : s.importance) x = round9(x);
    for (auto& o : s.observations) {
      for (auto& x : o) x = round9(x);
    }
  }
  return r;
}

}  // namespace emai::replay
