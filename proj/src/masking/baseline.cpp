#include "masking/baseline.hpp"

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "common/rng.hpp"
#include "common/stats.hpp"

#include <cmath>
#include <vector>

namespace emai::masking {

BaselineReturn estimate_baseline_return(const target::TargetPolicy& target, const envs::Environment& env,
                                        std::size_t episodes, double gamma, std::uint64_t seed,
                                        int workers) {
  require(episodes >= 1, ErrorCode::kInvalidArgument, "baseline return needs at least one episode");
  require(gamma >= 0.0 && gamma <= 1.0, ErrorCode::kInvalidArgument, "gamma must lie in [0, 1]");
  target::check_compatible(target, env);
  std::vector<double> returns(episodes), abs_sum(episodes), steps(episodes);
  parallel_for(episodes, workers, [&](std::size_t k) {
    auto e = env.clone();
    auto reset = e->reset(derive_seed(seed, Stream::kBaseline, k));
    envs::Observations obs = std::move(reset.observations);
    double ret = 0.0, discount = 1.0, abs_r = 0.0;
    std::size_t n = 0;
    while (!e->done()) {
      auto step = e->step(target::joint_action(target, obs));
      ret += discount * step.reward;
      discount *= gamma;
      abs_r += std::fabs(step.reward);
      ++n;
      obs = std::move(step.observations);
    }
    returns[k] = ret;
    abs_sum[k] = abs_r;
    steps[k] = static_cast<double>(n);
  });
  const MeanStderr ms = mean_stderr(returns);
  double total_abs = 0.0, total_steps = 0.0;
  for (std::size_t k = 0; k < episodes; ++k) {
    total_abs += abs_sum[k];
    total_steps += steps[k];
  }
  return {ms.mean, ms.se, total_steps > 0.0 ? total_abs / total_steps : 0.0, episodes};
}

}  // namespace emai::masking
