#include "envs/diagnostic.hpp"

#include "common/error.hpp"

namespace emai::envs {

ZeroReward::ZeroReward(std::unique_ptr<Environment> inner) : inner_(std::move(inner)) {
  require(inner_ != nullptr, ErrorCode::kInvalidArgument, "zero_reward: null inner environment");
}

ZeroReward::ZeroReward(const ZeroReward& other) : inner_(other.inner_->clone()) {}

StepResult ZeroReward::step(std::span<const int> joint_action) {
  StepResult r = inner_->step(joint_action);
  r.reward = 0.0;
  return r;
}

std::unique_ptr<Environment> ZeroReward::clone() const { return std::make_unique<ZeroReward>(*this); }

InertAgent::InertAgent(std::unique_ptr<Environment> inner) : inner_(std::move(inner)) {
  require(inner_ != nullptr, ErrorCode::kInvalidArgument, "inert_agent: null inner environment");
  spec_ = inner_->spec();
  spec_.n_agents += 1;
}

InertAgent::InertAgent(const InertAgent& other) : inner_(other.inner_->clone()), spec_(other.spec_) {}

ResetResult InertAgent::reset(std::uint64_t seed) {
  inner_->reset(seed);
  return {state(), observations()};
}

StepResult InertAgent::step(std::span<const int> joint_action) {
  validate_step(*this, joint_action);
  StepResult r = inner_->step(joint_action.first(joint_action.size() - 1));
  r.observations.emplace_back(spec_.obs_dim, 0.0);
  return r;
}

Observations InertAgent::observations() const {
  Observations obs = inner_->observations();
  obs.emplace_back(spec_.obs_dim, 0.0);
  return obs;
}

StateSummary InertAgent::summary() const { return inner_->summary(); }

std::unique_ptr<Environment> InertAgent::clone() const { return std::make_unique<InertAgent>(*this); }

}  // namespace emai::envs
