#pragma once

#include "ctde/agent_qnet.hpp"
#include "ctde/episode.hpp"
#include "ctde/mixer.hpp"
#include "nn/adam.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace emai::ctde {

struct LearnerConfig {
  double gamma = 0.99;
  nn::AdamConfig adam;
  std::int64_t stale_interval = 200;  // environment steps between stale refreshes
  double grad_clip = 10.0;
};

// Values for every transition of a batch, episode-major.
struct BatchValues {
  nn::Tensor q_tot;                  // [N x 1], differentiable w.r.t. theta and omega
  std::vector<double> targets;       // y_tot from the stale copies
  std::vector<std::size_t> offsets;  // episode e covers rows [offsets[e], offsets[e+1])
};

struct TrainStats {
  double total = 0.0;
  double td = 0.0;
  double extra = 0.0;
};

// y_tot = reward + gamma * max Q_hat_tot(next), or reward at terminal steps.
double td_target(double reward, double gamma, double next_max_q_tot, bool terminal);

// One-step TD learning of a shared agent network plus mixer against frozen
// (stale) copies of both.
class QLearner {
 public:
  using ExtraLoss =
      std::function<nn::Tensor(const BatchValues&, std::span<const Episode* const>)>;

  QLearner(AgentQNet net, Mixer mixer, LearnerConfig cfg);

  QLearner(const QLearner&) = delete;
  QLearner& operator=(const QLearner&) = delete;

  BatchValues evaluate(std::span<const Episode* const> batch) const;
  nn::Tensor td_loss(const BatchValues& values) const;

  // L = L_td (+ extra) -> backward -> clip -> one optimizer step.
  TrainStats train_step(std::span<const Episode* const> batch, const ExtraLoss& extra = {});

  // Refreshes the stale copies at every multiple of stale_interval that the
  // running environment-step count has reached.
  void on_env_steps(std::int64_t total_env_steps);
  void refresh_stale();

  std::int64_t refresh_count() const { return refreshes_; }
  std::int64_t updates() const { return optimizer_->steps(); }
  const LearnerConfig& config() const { return cfg_; }

  AgentQNet& net() { return net_; }
  const AgentQNet& net() const { return net_; }
  Mixer& mixer() { return mixer_; }
  const Mixer& mixer() const { return mixer_; }
  const AgentQNet& stale_net() const { return stale_net_; }
  const Mixer& stale_mixer() const { return stale_mixer_; }

  std::vector<nn::Tensor> parameters() const;

 private:
  AgentQNet net_;
  Mixer mixer_;
  AgentQNet stale_net_;
  Mixer stale_mixer_;
  LearnerConfig cfg_;
  std::unique_ptr<nn::Adam> optimizer_;
  std::int64_t next_refresh_ = 0;
  std::int64_t refreshes_ = 0;
};

}  // namespace emai::ctde
