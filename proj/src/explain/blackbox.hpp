#pragma once

#include "explain/explainer.hpp"
#include "masking/masking_policy.hpp"
#include "target/target_policy.hpp"

#include <memory>

namespace emai::explain {

// i.i.d. uniform scores, so every agent is equally likely to be most critical.
class RandomExplainer final : public Explainer {
 public:
  ExplainerKind kind() const override { return ExplainerKind::kRandom; }
  Access access() const override { return Access::kBlackBox; }
  std::string id() const override { return "random"; }
  std::vector<double> explain(const ExplainContext& ctx) const override;
};

// Q-gap (keep - mask) of the trained masking agents.
class EmaiExplainer final : public Explainer {
 public:
  explicit EmaiExplainer(std::shared_ptr<const masking::MaskingPolicy> policy);

  ExplainerKind kind() const override { return ExplainerKind::kEmai; }
  Access access() const override { return Access::kBlackBox; }
  std::string id() const override { return "emai"; }
  std::vector<double> explain(const ExplainContext& ctx) const override;

  const masking::MaskingPolicy& policy() const { return *policy_; }

 private:
  std::shared_ptr<const masking::MaskingPolicy> policy_;
};

// Brute-force counterfactual rollouts from the live environment state.
class McOracleExplainer final : public Explainer {
 public:
  McOracleExplainer(target::TargetPtr target, int rollouts, int workers = 1);

  ExplainerKind kind() const override { return ExplainerKind::kMcOracle; }
  Access access() const override { return Access::kBlackBox; }
  std::string id() const override { return "mc_oracle"; }
  std::vector<double> explain(const ExplainContext& ctx) const override;

 private:
  target::TargetPtr target_;
  int rollouts_;
  int workers_;
};

}  // namespace emai::explain
