#include "ctde/agent_qnet.hpp"

#include "common/error.hpp"

#include <algorithm>
#include <string>

namespace emai::ctde {

using nn::Activation;
using nn::Tensor;

AgentQNet::AgentQNet(std::size_t obs_dim, std::size_t n_agents, std::size_t n_actions,
                     std::size_t hidden, Rng& rng)
    : obs_dim_(obs_dim),
      n_agents_(n_agents),
      mlp_({obs_dim + n_agents, hidden, hidden, n_actions},
           {Activation::kRelu, Activation::kRelu, Activation::kIdentity}, rng) {}

AgentQNet::AgentQNet(std::size_t obs_dim, std::size_t n_agents, nn::Mlp mlp)
    : obs_dim_(obs_dim), n_agents_(n_agents), mlp_(std::move(mlp)) {
  require(mlp_.input_size() == obs_dim + n_agents, ErrorCode::kInvalidArgument,
          "agent q-net: mlp input size does not match obs_dim + n_agents");
}

Tensor AgentQNet::make_inputs(std::span<const double> obs_rows, std::size_t rows) const {
  require(obs_rows.size() == rows * obs_dim_, ErrorCode::kInvalidArgument,
          "agent q-net: expected " + std::to_string(rows) + " observations of length " +
              std::to_string(obs_dim_) + ", got " + std::to_string(obs_rows.size()) + " values");
  const std::size_t width = obs_dim_ + n_agents_;
  std::vector<double> in(rows * width, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(obs_rows.begin() + static_cast<std::ptrdiff_t>(r * obs_dim_), obs_dim_,
                in.begin() + static_cast<std::ptrdiff_t>(r * width));
    in[r * width + obs_dim_ + r % n_agents_] = 1.0;
  }
  return Tensor(rows, width, std::move(in));
}

Tensor AgentQNet::make_input(std::span<const double> obs, std::size_t agent_id) const {
  require(obs.size() == obs_dim_, ErrorCode::kInvalidArgument,
          "agent q-net: observation length " + std::to_string(obs.size()) + " != obs_dim " +
              std::to_string(obs_dim_));
  require(agent_id < n_agents_, ErrorCode::kInvalidArgument,
          "agent q-net: agent id " + std::to_string(agent_id) + " out of range");
  const std::size_t width = obs_dim_ + n_agents_;
  std::vector<double> in(width, 0.0);
  std::copy(obs.begin(), obs.end(), in.begin());
  in[obs_dim_ + agent_id] = 1.0;
  return Tensor(1, width, std::move(in));
}

std::vector<double> AgentQNet::q_values(std::span<const double> obs, std::size_t agent_id) const {
  const Tensor q = mlp_.forward(make_input(obs, agent_id));
  return {q.data().begin(), q.data().end()};
}

}  // namespace emai::ctde
