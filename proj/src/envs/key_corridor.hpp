#pragma once

#include "envs/environment.hpp"

namespace emai::envs {

// 7 x 5 grid, three agents. Layout (x to the right, y downward):
//
//   y0   S . . . . G G      S switch, A0 starts on row 0 at x in {1,2,3}
//   y1   # # # # # G G      D door (closed until any agent stands on S)
//   y2   . . . . D G G      agents 1-2 start in the 4 x 3 room at bottom-left
//   y3   . . . . # G G      G goal region (x >= 5)
//   y4   . . . . # G G
//
// The room's only exit is the door, so the switch is reachable only from
// agent 0's corridor while the door is closed.
// Reward per step: 0.1 * (#agents in goal region) - 0.01.
class KeyCorridor final : public Environment {
 public:
  static constexpr int kWidth = 7;
  static constexpr int kHeight = 5;
  static constexpr int kHorizon = 30;
  static constexpr int kAgents = 3;
  static constexpr Cell kSwitch{0, 0};
  static constexpr Cell kDoor{4, 2};
  static constexpr Cell kDoorFront{3, 2};
  static constexpr int kGoalMinX = 5;

  explicit KeyCorridor(double gamma = 0.99);

  std::string name() const override { return "key_corridor"; }
  const EnvSpec& spec() const override { return spec_; }

  ResetResult reset(std::uint64_t seed) override;
  StepResult step(std::span<const int> joint_action) override;

  std::vector<double> state() const override;
  Observations observations() const override;
  StateSummary summary() const override;

  int time() const override { return t_; }
  bool done() const override { return done_; }

  std::unique_ptr<Environment> clone() const override;

  bool door_open() const { return door_open_; }
  const std::vector<Cell>& agents() const { return agents_; }

  // Places the episode at t = 0 with explicit positions and a closed door.
  void place(std::vector<Cell> agents);

  static bool is_wall(Cell c);
  static bool passable(Cell c, bool door_open);
  static bool in_goal(Cell c) { return c.x >= kGoalMinX; }

  // Observation layout: [own x, own y, door flag, rel x/y of the other two agents].
  static constexpr std::size_t kObsDim = 7;

 private:
  EnvSpec spec_;
  int t_ = 0;
  bool done_ = true;
  bool door_open_ = false;
  std::vector<Cell> agents_;
};

}  // namespace emai::envs
