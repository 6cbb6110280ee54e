#include "explain/blackbox.hpp"

#include "common/error.hpp"
#include "explain/oracle.hpp"
#include "masking/importance.hpp"

namespace emai::explain {

std::vector<double> RandomExplainer::explain(const ExplainContext& ctx) const {
  require(ctx.rng != nullptr, ErrorCode::kInvalidArgument, "random explainer needs an rng");
  std::vector<double> scores(ctx.observations.size());
  for (auto& s : scores) s = uniform01(*ctx.rng);
  return scores;
}

EmaiExplainer::EmaiExplainer(std::shared_ptr<const masking::MaskingPolicy> policy) : policy_(std::move(policy)) {
  require(policy_ != nullptr, ErrorCode::kInvalidArgument, "emai explainer needs a masking policy");
}

std::vector<double> EmaiExplainer::explain(const ExplainContext& ctx) const {
  return masking::gaps(policy_->importance(ctx.observations));
}

McOracleExplainer::McOracleExplainer(target::TargetPtr target, int rollouts, int workers)
    : target_(std::move(target)), rollouts_(rollouts), workers_(workers) {
  require(target_ != nullptr, ErrorCode::kInvalidArgument, "oracle explainer needs a target");
  require(rollouts_ >= 1, ErrorCode::kInvalidArgument, "oracle needs at least one rollout per agent (K >= 1)");
}

std::vector<double> McOracleExplainer::explain(const ExplainContext& ctx) const {
  require(ctx.env != nullptr && ctx.rng != nullptr, ErrorCode::kInvalidArgument,
          "oracle explainer needs the live environment and an rng");
  const std::uint64_t seed = (*ctx.rng)();
  return mc_counterfactual_oracle(*target_, *ctx.env, rollouts_, seed, workers_).importance;
}

}  // namespace emai::explain
