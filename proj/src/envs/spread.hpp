#pragma once

#include "envs/environment.hpp"

namespace emai::envs {

// n agents cover n landmarks on a G x G grid. Reward per step:
//   -(1 / (n G)) * sum_landmarks min_i |agent_i - landmark|_1 - 0.05 * (#agent pairs sharing a cell)
class Spread final : public Environment {
 public:
  static constexpr int kHorizon = 25;
  static constexpr double kCollisionPenalty = 0.05;

  Spread(int n_agents, int grid, double gamma = 0.99);

  std::string name() const override { return "spread"; }
  const EnvSpec& spec() const override { return spec_; }

  ResetResult reset(std::uint64_t seed) override;
  StepResult step(std::span<const int> joint_action) override;

  std::vector<double> state() const override;
  Observations observations() const override;
  StateSummary summary() const override;

  int time() const override { return t_; }
  bool done() const override { return done_; }

  std::unique_ptr<Environment> clone() const override;

  int grid() const { return grid_; }
  const std::vector<Cell>& agents() const { return agents_; }
  const std::vector<Cell>& landmarks() const { return landmarks_; }

  // Places the episode at t = 0 with explicit positions.
  void place(std::vector<Cell> agents, std::vector<Cell> landmarks);

  static double reward(std::span<const Cell> agents, std::span<const Cell> landmarks, int grid);

 private:
  EnvSpec spec_;
  int grid_;
  int t_ = 0;
  bool done_ = true;
  std::vector<Cell> agents_;
  std::vector<Cell> landmarks_;
};

}  // namespace emai::envs
