#pragma once

#include "envs/environment.hpp"

#include <memory>
#include <string>

namespace emai::envs {

struct EnvConfig {
  std::string name = "key_corridor";  // spread | key_corridor
  int n_agents = 3;                    // spread only
  int grid = 8;                        // spread only
  double gamma = 0.99;
  std::string diagnostic = "none";     // none | zero_reward | inert_agent
};

std::unique_ptr<Environment> make_env(const EnvConfig& cfg);

}  // namespace emai::envs
