#pragma once

#include "envs/environment.hpp"

namespace emai::envs {

// Wraps an environment and reports zero team reward. With no task signal,
// the masking reward is the only thing a masking policy can learn from.
class ZeroReward final : public Environment {
 public:
  explicit ZeroReward(std::unique_ptr<Environment> inner);
  ZeroReward(const ZeroReward& other);

  std::string name() const override { return "zero_reward:" + inner_->name(); }
  const EnvSpec& spec() const override { return inner_->spec(); }
  ResetResult reset(std::uint64_t seed) override { return inner_->reset(seed); }
  StepResult step(std::span<const int> joint_action) override;
  std::vector<double> state() const override { return inner_->state(); }
  Observations observations() const override { return inner_->observations(); }
  StateSummary summary() const override { return inner_->summary(); }
  int time() const override { return inner_->time(); }
  bool done() const override { return inner_->done(); }
  std::unique_ptr<Environment> clone() const override;

 private:
  std::unique_ptr<Environment> inner_;
};

// Adds one extra agent whose actions are ignored and whose observation is all
// zeros. Its counterfactual importance is zero by construction.
class InertAgent final : public Environment {
 public:
  explicit InertAgent(std::unique_ptr<Environment> inner);
  InertAgent(const InertAgent& other);

  std::string name() const override { return "inert_agent:" + inner_->name(); }
  const EnvSpec& spec() const override { return spec_; }
  ResetResult reset(std::uint64_t seed) override;
  StepResult step(std::span<const int> joint_action) override;
  std::vector<double> state() const override { return inner_->state(); }
  Observations observations() const override;
  StateSummary summary() const override;
  int time() const override { return inner_->time(); }
  bool done() const override { return inner_->done(); }
  std::unique_ptr<Environment> clone() const override;

 private:
  std::unique_ptr<Environment> inner_;
  EnvSpec spec_;
};

}  // namespace emai::envs
