#pragma once

#include "envs/action_space.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace emai::envs {

// Move indices shared by the grid worlds.
enum Move : int { kStay = 0, kUp = 1, kDown = 2, kLeft = 3, kRight = 4 };
inline constexpr int kNumMoves = 5;

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

inline int manhattan(Cell a, Cell b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

Cell apply_move(Cell c, int move);

struct EnvSpec {
  std::size_t n_agents = 0;
  std::size_t obs_dim = 0;
  std::size_t state_dim = 0;
  ActionSpace action_space{Discrete{kNumMoves}};
  int horizon = 1;
  double gamma = 0.99;
};

using Observations = std::vector<std::vector<double>>;

struct ResetResult {
  std::vector<double> state;
  Observations observations;
};

struct StepResult {
  std::vector<double> next_state;
  Observations observations;
  double reward = 0.0;
  bool done = false;
};

// Human-readable snapshot used by replays and ASCII rendering.
struct StateSummary {
  int width = 0;
  int height = 0;
  std::vector<Cell> agents;
  std::vector<Cell> landmarks;
  std::vector<Cell> walls;
  std::optional<bool> door_open;
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;
  virtual const EnvSpec& spec() const = 0;

  virtual ResetResult reset(std::uint64_t seed) = 0;
  virtual StepResult step(std::span<const int> joint_action) = 0;

  virtual std::vector<double> state() const = 0;
  virtual Observations observations() const = 0;
  virtual StateSummary summary() const = 0;

  virtual int time() const = 0;
  virtual bool done() const = 0;

  virtual std::unique_ptr<Environment> clone() const = 0;
};

// Shared validation for step(): throws on a finished episode or bad actions.
void validate_step(const Environment& env, std::span<const int> joint_action);

}  // namespace emai::envs
