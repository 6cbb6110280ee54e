#include "envs/environment.hpp"

#include "common/error.hpp"

#include <string>

namespace emai::envs {

Cell apply_move(Cell c, int move) {
  switch (move) {
    case kUp: --c.y; break;
    case kDown: ++c.y; break;
    case kLeft: --c.x; break;
    case kRight: ++c.x; break;
    default: break;
  }
  return c;
}

void validate_step(const Environment& env, std::span<const int> joint_action) {
  require(!env.done(), ErrorCode::kInvalidArgument,
          env.name() + ": step() called after the episode terminated");
  const auto& spec = env.spec();
  require(joint_action.size() == spec.n_agents, ErrorCode::kInvalidArgument,
          env.name() + ": expected " + std::to_string(spec.n_agents) + " actions, got " +
              std::to_string(joint_action.size()));
  for (std::size_t i = 0; i < joint_action.size(); ++i) {
    require(spec.action_space.contains(joint_action[i]), ErrorCode::kInvalidArgument,
            env.name() + ": invalid action " + std::to_string(joint_action[i]) + " for agent " +
                std::to_string(i));
  }
}

}  // namespace emai::envs
