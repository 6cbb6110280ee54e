#include "ctde/exploration.hpp"

#include "common/error.hpp"

#include <algorithm>

namespace emai::ctde {

int argmax(std::span<const double> values) {
  require(!values.empty(), ErrorCode::kInvalidArgument, "argmax of an empty vector");
  int best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

int epsilon_greedy(std::span<const double> q, double epsilon, Rng& rng) {
  require(epsilon >= 0.0 && epsilon <= 1.0, ErrorCode::kInvalidArgument, "epsilon must lie in [0, 1]");
  const double u = uniform01(rng);
  if (u < epsilon) return uniform_index(rng, static_cast<int>(q.size()));
  return argmax(q);
}

double EpsilonSchedule::value(std::int64_t step) const {
  if (anneal_steps <= 0 || step >= anneal_steps) return end;
  const double frac = static_cast<double>(std::max<std::int64_t>(step, 0)) / static_cast<double>(anneal_steps);
  return start + (end - start) * frac;
}

}  // namespace emai::ctde
