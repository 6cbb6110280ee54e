#include "explain/oracle.hpp"

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "common/rng.hpp"
#include "common/stats.hpp"
#include "masking/mask.hpp"

#include <cmath>

namespace emai::explain {

std::unique_ptr<envs::Environment> replay_prefix(const envs::Environment& proto, const Prefix& prefix) {
  auto env = proto.clone();
  env->reset(prefix.reset_seed);
  for (const auto& a : prefix.joint_actions) env->step(a);
  return env;
}

namespace {

// Remaining reward from the snapshot with `masked_agent` randomized (or none
// when masked_agent == n).
double rollout(const target::TargetPolicy& target, const envs::Environment& snapshot, std::size_t masked_agent,
               Rng& rng) {
  auto env = snapshot.clone();
  const std::size_t n = env->spec().n_agents;
  const auto mask = masked_agent < n ? masking::MaskAction::single(n, masked_agent) : masking::MaskAction::none(n);
  envs::Observations obs = env->observations();
  double total = 0.0;
  while (!env->done()) {
    const auto actions = masking::compose_actions(target::joint_action(target, obs), mask, env->spec().action_space, rng);
    auto step = env->step(actions);
    total += step.reward;
    obs = std::move(step.observations);
  }
  return total;
}

}  // namespace

OracleResult mc_counterfactual_oracle(const target::TargetPolicy& target, const envs::Environment& snapshot, int K,
                                      std::uint64_t seed, int workers) {
  require(K >= 1, ErrorCode::kInvalidArgument, "oracle needs at least one rollout per agent (K >= 1)");
  const std::size_t n = snapshot.spec().n_agents;
  const auto k = static_cast<std::size_t>(K);
  // Row n holds the unmasked rollouts.
  std::vector<double> returns((n + 1) * k);
  parallel_for(returns.size(), workers, [&](std::size_t job) {
    Rng rng = make_rng(seed, Stream::kOracle, job);
    returns[job] = rollout(target, snapshot, job / k, rng);
  });
  OracleResult out;
  out.rollouts = K;
  const auto base = mean_stderr(std::span<const double>(returns).subspan(n * k, k));
  out.unmasked_mean = base.mean;
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = mean_stderr(std::span<const double>(returns).subspan(i * k, k));
    out.masked_mean.push_back(m.mean);
    out.importance.push_back(std::fabs(m.mean - base.mean));
    out.stderrs.push_back(std::sqrt(m.se * m.se + base.se * base.se));
  }
  return out;
}

OracleResult mc_counterfactual_oracle(const target::TargetPolicy& target, const envs::Environment& proto,
                                      const Prefix& prefix, int K, std::uint64_t seed, int workers) {
  const auto env = replay_prefix(proto, prefix);
  return mc_counterfactual_oracle(target, *env, K, seed, workers);
}

}  // namespace emai::explain
