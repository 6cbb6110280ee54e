#include "masking/trainer.hpp"

#include "common/checksum.hpp"
#include "common/alloc.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "ctde/episode_buffer.hpp"
#include "ctde/exploration.hpp"
#include "ctde/learner.hpp"

#include <cmath>
#include <sstream>

namespace emai::masking {

std::string curve_to_csv(const std::vector<EmaiCurvePoint>& curve) {
  std::ostringstream ss;
  ss.precision(9);
  ss << "env_steps,episode,epsilon,episode_return,mask_rate,loss_total,loss_td,loss_diff\n";
  for (const auto& p : curve) {
    ss << p.env_steps << ',' << p.episode << ',' << p.epsilon << ',' << p.episode_return << ',' << p.mask_rate
       << ',' << p.loss_total << ',' << p.loss_td << ',' << p.loss_diff << '\n';
  }
  return ss.str();
}

std::string target_checksum(const target::TargetPolicy& target) { return sha256_hex(target.id()); }

TrainedMasker train_emai(const target::TargetPolicy& target, envs::Environment& env, const EmaiConfig& cfg,
                         std::optional<BaselineReturn> baseline) {
  tune_allocator();
  target::check_compatible(target, env);
  const auto& spec = env.spec();
  const auto& tc = cfg.training;
  require(cfg.lambda >= 0.0, ErrorCode::kConfig, "emai.lambda must be >= 0");
  require(cfg.gamma >= 0.0 && cfg.gamma <= 1.0, ErrorCode::kConfig, "emai.gamma must lie in [0, 1]");
  require(tc.batch_episodes > 0, ErrorCode::kConfig, "training.batch_episodes must be positive");
  require(tc.updates_per_episode > 0, ErrorCode::kConfig, "training.updates_per_episode must be positive");

  if (!baseline) {
    baseline = estimate_baseline_return(target, env, cfg.baseline_episodes, cfg.gamma, tc.seed, cfg.workers);
  }
  const double beta = cfg.beta ? *cfg.beta : cfg.beta_scale * baseline->mean_abs_step_reward;
  require(beta >= 0.0, ErrorCode::kConfig, "emai.beta must be >= 0");

  Rng init_rng = make_rng(tc.seed, Stream::kInit, 1);
  ctde::AgentQNet net(spec.obs_dim, spec.n_agents, 2, tc.hidden, init_rng);
  ctde::Mixer mixer(tc.mixer, spec.n_agents, spec.state_dim, tc.mixer_embed, tc.hidden, init_rng);
  ctde::LearnerConfig lc;
  lc.gamma = cfg.gamma;
  lc.adam.lr = tc.lr;
  lc.stale_interval = tc.stale_interval;
  lc.grad_clip = tc.grad_clip;
  ctde::QLearner learner(std::move(net), std::move(mixer), lc);
  ctde::EpisodeBuffer buffer(tc.buffer_episodes);
  Rng sample_rng = make_rng(tc.seed, Stream::kReplay, 1);

  const double j_pi = baseline->mean;
  double last_diff = 0.0;
  const ctde::QLearner::ExtraLoss extra = [&](const ctde::BatchValues& values,
                                              std::span<const ctde::Episode* const> batch) {
    const nn::Tensor ld = diff_loss(values, batch, j_pi, cfg.gamma, cfg.diff_mode);
    last_diff = ld.item();
    return nn::scale(ld, cfg.lambda);
  };

  std::vector<EmaiCurvePoint> curve;
  std::int64_t env_steps = 0;
  std::int64_t episode = 0;
  ctde::TrainStats last;
  while (env_steps < tc.steps) {
    const auto ep_index = static_cast<std::uint64_t>(episode);
    Rng explore_rng = make_rng(tc.seed, Stream::kExploration, ep_index);
    Rng mask_rng = make_rng(tc.seed, Stream::kMasking, ep_index);
    auto reset = env.reset(derive_seed(tc.seed, Stream::kEnvReset, ep_index));
    ctde::EpisodeBuilder builder(spec.n_agents, spec.obs_dim, spec.state_dim);
    builder.begin(reset.observations, reset.state);
    envs::Observations obs = std::move(reset.observations);
    const double eps = tc.epsilon.value(env_steps);
    double ep_return = 0.0;
    std::int64_t masked = 0, decisions = 0;
    while (!env.done()) {
      const std::vector<int> target_actions = target::joint_action(target, obs);
      std::vector<double> flat;
      for (const auto& o : obs) flat.insert(flat.end(), o.begin(), o.end());
      const nn::Tensor q = learner.net().forward(learner.net().make_inputs(flat, spec.n_agents));
      const double eps_t = tc.epsilon.value(env_steps);
      std::vector<int> bits(spec.n_agents);
      for (std::size_t i = 0; i < spec.n_agents; ++i) {
        bits[i] = ctde::epsilon_greedy(q.data().subspan(i * 2, 2), eps_t, explore_rng);
      }
      const MaskAction mask(bits);
      const std::vector<int> final_actions = compose_actions(target_actions, mask, spec.action_space, mask_rng);
      auto step = env.step(final_actions);
      const double rm = masking_reward(mask, beta);
      builder.add(mask.bits(), step.reward + rm, rm, step.observations, step.next_state, step.done);
      ep_return += step.reward;
      masked += mask.count();
      decisions += static_cast<std::int64_t>(spec.n_agents);
      obs = std::move(step.observations);
      ++env_steps;
    }
    buffer.add(builder.finish());
    learner.on_env_steps(env_steps);
    if (buffer.size() >= tc.batch_episodes) {
      for (std::size_t u = 0; u < tc.updates_per_episode; ++u) {
        const auto batch = buffer.sample(tc.batch_episodes, sample_rng);
        last = learner.train_step(batch, extra);
      }
    }
    curve.push_back({env_steps, episode, eps, ep_return,
                     decisions > 0 ? static_cast<double>(masked) / static_cast<double>(decisions) : 0.0,
                     last.total, last.td, last_diff});
    ++episode;
  }

  MaskingParams params;
  params.beta = beta;
  params.lambda = cfg.lambda;
  params.gamma = cfg.gamma;
  params.j_pi = baseline->mean;
  params.j_pi_stderr = baseline->se;
  params.target_checksum = target_checksum(target);
  params.diff_mode = to_string(cfg.diff_mode);
  return TrainedMasker{MaskingPolicy(env.name(), learner.net(), learner.mixer(), params), *baseline, env_steps,
                       std::move(curve)};
}

}  // namespace emai::masking
