#include "explain/factory.hpp"

#include "common/error.hpp"
#include "explain/blackbox.hpp"

namespace emai::explain {

std::shared_ptr<const Explainer> make_explainer(const ExplainerOptions& opts, const target::TargetPtr& target) {
  require(target != nullptr, ErrorCode::kInvalidArgument, "explainer needs a target");
  switch (opts.kind) {
    case ExplainerKind::kRandom:
      return std::make_shared<RandomExplainer>();
    case ExplainerKind::kEmai:
      require(opts.masker != nullptr, ErrorCode::kMissingArtifact, "emai explainer needs a masking checkpoint");
      require(opts.masker->env_name() == target->env_name() ||
                  opts.masker->env_name().ends_with(":" + target->env_name()),
              ErrorCode::kIncompatible,
              "masking policy was trained on '" + opts.masker->env_name() + "', target is for '" +
                  target->env_name() + "'");
      return std::make_shared<EmaiExplainer>(opts.masker);
    case ExplainerKind::kMcOracle:
      return std::make_shared<McOracleExplainer>(target, opts.oracle_rollouts, opts.workers);
    case ExplainerKind::kValueBased:
      return std::make_shared<ValueBasedExplainer>(*target);
    case ExplainerKind::kGradientBased:
      return std::make_shared<GradientBasedExplainer>(*target, opts.grad_norm);
  }
  fail(ErrorCode::kConfig, "unknown explainer kind");
}

}  // namespace emai::explain
