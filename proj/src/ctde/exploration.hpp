#pragma once

#include "common/rng.hpp"

#include <cstdint>
#include <span>

namespace emai::ctde {

// Index of the largest value; the lowest index wins ties.
int argmax(std::span<const double> values);

// With probability epsilon a uniform action, otherwise argmax. Always draws
// exactly one uniform first so the rng advances the same way for every epsilon.
int epsilon_greedy(std::span<const double> q, double epsilon, Rng& rng);

struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  std::int64_t anneal_steps = 50000;

  double value(std::int64_t step) const;
};

}  // namespace emai::ctde
