#include "envs/spread.hpp"

#include "common/error.hpp"
#include "common/rng.hpp"

#include <algorithm>
#include <limits>

namespace emai::envs {

namespace {

double norm_pos(int v, int grid) { return 2.0 * v / (grid - 1) - 1.0; }
double norm_rel(int d, int grid) { return static_cast<double>(d) / (grid - 1); }

Cell random_free_cell(Rng& rng, int grid, const std::vector<Cell>& taken) {
  for (;;) {
    Cell c{uniform_index(rng, grid), uniform_index(rng, grid)};
    if (std::find(taken.begin(), taken.end(), c) == taken.end()) return c;
  }
}

}  // namespace

Spread::Spread(int n_agents, int grid, double gamma) : grid_(grid) {
  require(n_agents >= 2, ErrorCode::kInvalidArgument, "spread needs n_agents >= 2");
  require(grid >= 2 && grid * grid >= n_agents, ErrorCode::kInvalidArgument,
          "spread grid too small for the agent count");
  require(gamma > 0.0 && gamma <= 1.0, ErrorCode::kInvalidArgument, "gamma must lie in (0, 1]");
  const auto n = static_cast<std::size_t>(n_agents);
  spec_.n_agents = n;
  spec_.obs_dim = 2 + 2 * n + 2 * (n - 1);
  spec_.state_dim = 4 * n + 1;
  spec_.horizon = kHorizon;
  spec_.gamma = gamma;
}

ResetResult Spread::reset(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Cell> lm;
  for (std::size_t i = 0; i < spec_.n_agents; ++i) lm.push_back(random_free_cell(rng, grid_, lm));
  std::vector<Cell> ag;
  for (std::size_t i = 0; i < spec_.n_agents; ++i) ag.push_back(random_free_cell(rng, grid_, ag));
  place(std::move(ag), std::move(lm));
  return {state(), observations()};
}

void Spread::place(std::vector<Cell> agents, std::vector<Cell> landmarks) {
  require(agents.size() == spec_.n_agents && landmarks.size() == spec_.n_agents,
          ErrorCode::kInvalidArgument, "spread: wrong number of agents or landmarks");
  auto inside = [&](Cell c) { return c.x >= 0 && c.y >= 0 && c.x < grid_ && c.y < grid_; };
  require(std::all_of(agents.begin(), agents.end(), inside) &&
              std::all_of(landmarks.begin(), landmarks.end(), inside),
          ErrorCode::kInvalidArgument, "spread: position outside the grid");
  agents_ = std::move(agents);
  landmarks_ = std::move(landmarks);
  t_ = 0;
  done_ = false;
}

double Spread::reward(std::span<const Cell> agents, std::span<const Cell> landmarks, int grid) {
  double dist = 0.0;
  for (const Cell& l : landmarks) {
    int best = std::numeric_limits<int>::max();
    for (const Cell& a : agents) best = std::min(best, manhattan(a, l));
    dist += best;
  }
  int shared = 0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) shared += agents[i] == agents[j] ? 1 : 0;
  }
  const double n = static_cast<double>(agents.size());
  return -dist / (n * grid) - kCollisionPenalty * shared;
}

StepResult Spread::step(std::span<const int> joint_action) {
  validate_step(*this, joint_action);
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const Cell next = apply_move(agents_[i], joint_action[i]);
    if (next.x >= 0 && next.y >= 0 && next.x < grid_ && next.y < grid_) agents_[i] = next;
  }
  ++t_;
  done_ = t_ >= spec_.horizon;
  return {state(), observations(), reward(agents_, landmarks_, grid_), done_};
}

std::vector<double> Spread::state() const {
  std::vector<double> s;
  s.reserve(spec_.state_dim);
  for (const Cell& a : agents_) {
    s.push_back(norm_pos(a.x, grid_));
    s.push_back(norm_pos(a.y, grid_));
  }
  for (const Cell& l : landmarks_) {
    s.push_back(norm_pos(l.x, grid_));
    s.push_back(norm_pos(l.y, grid_));
  }
  s.push_back(static_cast<double>(t_) / spec_.horizon);
  return s;
}

Observations Spread::observations() const {
  Observations out(spec_.n_agents);
  for (std::size_t i = 0; i < spec_.n_agents; ++i) {
    auto& o = out[i];
    o.reserve(spec_.obs_dim);
    const Cell self = agents_[i];
    o.push_back(norm_pos(self.x, grid_));
    o.push_back(norm_pos(self.y, grid_));
    for (const Cell& l : landmarks_) {
      o.push_back(norm_rel(l.x - self.x, grid_));
      o.push_back(norm_rel(l.y - self.y, grid_));
    }
    for (std::size_t j = 0; j < spec_.n_agents; ++j) {
      if (j == i) continue;
      o.push_back(norm_rel(agents_[j].x - self.x, grid_));
      o.push_back(norm_rel(agents_[j].y - self.y, grid_));
    }
  }
  return out;
}

StateSummary Spread::summary() const {
  StateSummary s;
  s.width = grid_;
  s.height = grid_;
  s.agents = agents_;
  s.landmarks = landmarks_;
  return s;
}

std::unique_ptr<Environment> Spread::clone() const { return std::make_unique<Spread>(*this); }

}  // namespace emai::envs
