#include "envs/key_corridor.hpp"

#include "common/error.hpp"
#include "common/rng.hpp"

#include <algorithm>

namespace emai::envs {

namespace {

double norm_x(int x) { return 2.0 * x / (KeyCorridor::kWidth - 1) - 1.0; }
double norm_y(int y) { return 2.0 * y / (KeyCorridor::kHeight - 1) - 1.0; }

}  // namespace

KeyCorridor::KeyCorridor(double gamma) {
  require(gamma > 0.0 && gamma <= 1.0, ErrorCode::kInvalidArgument, "gamma must lie in (0, 1]");
  spec_.n_agents = kAgents;
  spec_.obs_dim = kObsDim;
  spec_.state_dim = 2 * kAgents + 2;
  spec_.horizon = kHorizon;
  spec_.gamma = gamma;
}

bool KeyCorridor::is_wall(Cell c) {
  if (c.y == 1 && c.x <= 4) return true;
  if (c.x == 4 && c.y >= 3) return true;
  return false;
}

bool KeyCorridor::passable(Cell c, bool door_open) {
  if (c.x < 0 || c.y < 0 || c.x >= kWidth || c.y >= kHeight) return false;
  if (is_wall(c)) return false;
  if (c == kDoor) return door_open;
  return true;
}

ResetResult KeyCorridor::reset(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Cell> ag;
  ag.push_back(Cell{1 + uniform_index(rng, 3), 0});
  while (ag.size() < kAgents) {
    Cell c{uniform_index(rng, 4), 2 + uniform_index(rng, 3)};
    if (std::find(ag.begin(), ag.end(), c) == ag.end()) ag.push_back(c);
  }
  place(std::move(ag));
  return {state(), observations()};
}

void KeyCorridor::place(std::vector<Cell> agents) {
  require(agents.size() == kAgents, ErrorCode::kInvalidArgument, "key_corridor: needs 3 agents");
  for (const Cell& c : agents) {
    require(passable(c, false), ErrorCode::kInvalidArgument, "key_corridor: agent placed on a blocked cell");
  }
  agents_ = std::move(agents);
  t_ = 0;
  done_ = false;
  door_open_ = false;
}

StepResult KeyCorridor::step(std::span<const int> joint_action) {
  validate_step(*this, joint_action);
  // Simultaneous moves: passability is judged on the door state at time t.
  const bool door_before = door_open_;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const Cell next = apply_move(agents_[i], joint_action[i]);
    if (passable(next, door_before)) agents_[i] = next;
  }
  for (const Cell& a : agents_) door_open_ = door_open_ || a == kSwitch;
  ++t_;
  done_ = t_ >= kHorizon;
  const auto in_goal_count = std::count_if(agents_.begin(), agents_.end(), in_goal);
  const double reward = 0.1 * static_cast<double>(in_goal_count) - 0.01;
  return {state(), observations(), reward, done_};
}

std::vector<double> KeyCorridor::state() const {
  std::vector<double> s;
  s.reserve(spec_.state_dim);
  for (const Cell& a : agents_) {
    s.push_back(norm_x(a.x));
    s.push_back(norm_y(a.y));
  }
  s.push_back(door_open_ ? 1.0 : -1.0);
  s.push_back(static_cast<double>(t_) / kHorizon);
  return s;
}

Observations KeyCorridor::observations() const {
  Observations out(kAgents);
  for (std::size_t i = 0; i < kAgents; ++i) {
    auto& o = out[i];
    o.reserve(kObsDim);
    const Cell self = agents_[i];
    o.push_back(norm_x(self.x));
    o.push_back(norm_y(self.y));
    o.push_back(door_open_ ? 1.0 : -1.0);
    for (std::size_t j = 0; j < kAgents; ++j) {
      if (j == i) continue;
      o.push_back(static_cast<double>(agents_[j].x - self.x) / (kWidth - 1));
      o.push_back(static_cast<double>(agents_[j].y - self.y) / (kHeight - 1));
    }
  }
  return out;
}

StateSummary KeyCorridor::summary() const {
  StateSummary s;
  s.width = kWidth;
  s.height = kHeight;
  s.agents = agents_;
  s.landmarks = {kSwitch};
  for (int y = 0; y < kHeight; ++y) {
    for (int x = 0; x < kWidth; ++x) {
      if (is_wall({x, y})) s.walls.push_back({x, y});
    }
  }
  if (!door_open_) s.walls.push_back(kDoor);
  s.door_open = door_open_;
  return s;
}

std::unique_ptr<Environment> KeyCorridor::clone() const {
  return std::make_unique<KeyCorridor>(*this);
}

}  // namespace emai::envs
