#pragma once

#include "ctde/agent_qnet.hpp"
#include "explain/explainer.hpp"
#include "target/target_policy.hpp"

namespace emai::explain {

enum class GradNorm { kL1, kL2 };

GradNorm grad_norm_from_string(const std::string& s);

// score_i = max_a Q_i(o_i, a) from the learned target's utility network.
class ValueBasedExplainer final : public Explainer {
 public:
  explicit ValueBasedExplainer(const target::TargetPolicy& target);

  ExplainerKind kind() const override { return ExplainerKind::kValueBased; }
  Access access() const override { return Access::kWhiteBox; }
  std::string id() const override { return "value_based"; }
  std::vector<double> explain(const ExplainContext& ctx) const override;

 private:
  ctde::AgentQNet net_;
};

// score_i = |d log p(a_i | o_i) / d o_i| (L1 or L2) with p = softmax(Q_i) and
// a_i the greedy action.
class GradientBasedExplainer final : public Explainer {
 public:
  GradientBasedExplainer(const target::TargetPolicy& target, GradNorm norm = GradNorm::kL1);

  ExplainerKind kind() const override { return ExplainerKind::kGradientBased; }
  Access access() const override { return Access::kWhiteBox; }
  std::string id() const override { return norm_ == GradNorm::kL1 ? "gradient_based" : "gradient_based_l2"; }
  std::vector<double> explain(const ExplainContext& ctx) const override;

 private:
  ctde::AgentQNet net_;
  GradNorm norm_;
};

}  // namespace emai::explain
