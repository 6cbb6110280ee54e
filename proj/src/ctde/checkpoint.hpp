#pragma once

#include "ctde/agent_qnet.hpp"
#include "ctde/mixer.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace emai::ctde {

inline constexpr int kCheckpointVersion = 1;

struct CheckpointHeader {
  std::string kind;  // "target" or "masking"
  std::string env;
  std::size_t n_agents = 0;
  std::size_t obs_dim = 0;
  std::size_t n_actions = 0;
  std::string mixer;
  std::int64_t training_step = 0;
  nlohmann::json extra = nlohmann::json::object();  // module-specific header fields
};

struct Checkpoint {
  CheckpointHeader header;
  AgentQNet net;
  Mixer mixer;
};

nlohmann::json checkpoint_to_json(const CheckpointHeader& header, const AgentQNet& net, const Mixer& mixer);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                     const AgentQNet& net, const Mixer& mixer);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace emai::ctde
