#pragma once

#include "common/rng.hpp"
#include "nn/mlp.hpp"

#include <span>
#include <vector>

namespace emai::ctde {

// Shared per-agent utility network Q_i(o_i, a; theta). The input is the
// agent's observation followed by a one-hot agent id.
class AgentQNet {
 public:
  AgentQNet() = default;
  AgentQNet(std::size_t obs_dim, std::size_t n_agents, std::size_t n_actions, std::size_t hidden, Rng& rng);
  AgentQNet(std::size_t obs_dim, std::size_t n_agents, nn::Mlp mlp);

  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t n_agents() const { return n_agents_; }
  std::size_t n_actions() const { return mlp_.output_size(); }

  // rows x (obs_dim + n_agents) inputs; rows are agent-major within each
  // observation block, i.e. row r belongs to agent r % n_agents.
  nn::Tensor make_inputs(std::span<const double> obs_rows, std::size_t rows) const;
  nn::Tensor make_input(std::span<const double> obs, std::size_t agent_id) const;

  nn::Tensor forward(const nn::Tensor& inputs) const { return mlp_.forward(inputs); }

  std::vector<double> q_values(std::span<const double> obs, std::size_t agent_id) const;

  nn::Mlp& mlp() { return mlp_; }
  const nn::Mlp& mlp() const { return mlp_; }

 private:
  std::size_t obs_dim_ = 0;
  std::size_t n_agents_ = 0;
  nn::Mlp mlp_;
};

}  // namespace emai::ctde
