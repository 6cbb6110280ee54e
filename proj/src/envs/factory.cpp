#include "envs/factory.hpp"

#include "common/error.hpp"
#include "envs/diagnostic.hpp"
#include "envs/key_corridor.hpp"
#include "envs/spread.hpp"

namespace emai::envs {

std::unique_ptr<Environment> make_env(const EnvConfig& cfg) {
  std::unique_ptr<Environment> env;
  if (cfg.name == "spread") {
    env = std::make_unique<Spread>(cfg.n_agents, cfg.grid, cfg.gamma);
  } else if (cfg.name == "key_corridor") {
    env = std::make_unique<KeyCorridor>(cfg.gamma);
  } else {
    fail(ErrorCode::kConfig, "unknown environment '" + cfg.name + "' (expected spread or key_corridor)");
  }
  if (cfg.diagnostic == "zero_reward") return std::make_unique<ZeroReward>(std::move(env));
  if (cfg.diagnostic == "inert_agent") return std::make_unique<InertAgent>(std::move(env));
  require(cfg.diagnostic == "none", ErrorCode::kConfig,
          "unknown diagnostic wrapper '" + cfg.diagnostic + "'");
  return env;
}

}  // namespace emai::envs
