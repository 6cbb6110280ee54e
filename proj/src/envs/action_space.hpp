#pragma once

#include "common/rng.hpp"

#include <variant>
#include <vector>

namespace emai::envs {

struct Discrete {
  int count = 0;
};

struct Continuous {
  std::vector<double> lb;
  std::vector<double> ub;
};

// A single agent's action: an index for discrete spaces, a vector otherwise.
using Action = std::variant<int, std::vector<double>>;

class ActionSpace {
 public:
  explicit ActionSpace(Discrete d);
  explicit ActionSpace(Continuous c);

  bool is_discrete() const { return std::holds_alternative<Discrete>(kind_); }
  int count() const;  // discrete only
  const Continuous& bounds() const;  // continuous only

  bool contains(const Action& a) const;

 private:
  std::variant<Discrete, Continuous> kind_;
};

// Uniform over the whole space. The original action is not excluded.
Action random_action(const ActionSpace& space, Rng& rng);

}  // namespace emai::envs
