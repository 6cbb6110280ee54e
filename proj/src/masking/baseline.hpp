#pragma once

#include "envs/environment.hpp"
#include "target/target_policy.hpp"

#include <cstdint>

namespace emai::masking {

struct BaselineReturn {
  double mean = 0.0;               // J(pi): mean discounted return
  double se = 0.0;                 // standard error of the mean
  double mean_abs_step_reward = 0.0;
  std::size_t episodes = 0;
};

// Monte-Carlo estimate of the unmasked target's expected discounted return
// over `episodes` seeded episodes. Episodes are independent and merged in
// seed order, so the result does not depend on `workers`.
BaselineReturn estimate_baseline_return(const target::TargetPolicy& target, const envs::Environment& env,
                                        std::size_t episodes, double gamma, std::uint64_t seed,
                                        int workers = 1);

}  // namespace emai::masking
