#pragma once

#include "ctde/agent_qnet.hpp"
#include "ctde/mixer.hpp"
#include "envs/environment.hpp"
#include "masking/importance.hpp"
#include "masking/mask.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace emai::masking {

struct MaskingParams {
  double beta = 0.0;
  double lambda = 1.0;
  double gamma = 0.99;
  double j_pi = 0.0;
  double j_pi_stderr = 0.0;
  std::string target_checksum;
  std::string diff_mode = "realized";
};

// Trained masking agents: theta (2-action agent network) and omega (mixer).
class MaskingPolicy {
 public:
  MaskingPolicy(std::string env_name, ctde::AgentQNet net, ctde::Mixer mixer, MaskingParams params);

  const std::string& env_name() const { return env_name_; }
  std::size_t n_agents() const { return net_.n_agents(); }
  std::size_t obs_dim() const { return net_.obs_dim(); }
  const MaskingParams& params() const { return params_; }
  const ctde::AgentQNet& net() const { return net_; }
  const ctde::Mixer& mixer() const { return mixer_; }

  // Read straight from the Q values, no sampling.
  std::vector<ImportanceScore> importance(const envs::Observations& obs) const;
  MaskAction greedy_mask(const envs::Observations& obs) const;

  void save(const std::filesystem::path& path, std::int64_t training_step) const;
  static MaskingPolicy load(const std::filesystem::path& path);

 private:
  std::string env_name_;
  ctde::AgentQNet net_;
  ctde::Mixer mixer_;
  MaskingParams params_;
};

}  // namespace emai::masking
