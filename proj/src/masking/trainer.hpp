#pragma once

#include "envs/environment.hpp"
#include "masking/baseline.hpp"
#include "masking/diff_loss.hpp"
#include "masking/masking_policy.hpp"
#include "target/target_policy.hpp"
#include "target/trainer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace emai::masking {

struct EmaiConfig {
  std::optional<double> beta;   // unset: beta_scale * mean |step reward| of the baseline rollouts
  double beta_scale = 0.02;
  double lambda = 1.0;
  double gamma = 0.99;
  std::size_t baseline_episodes = 500;
  DiffMode diff_mode = DiffMode::kRealized;  // literal saturates every mask at lambda = 1
  target::TrainConfig training = default_training();
  int workers = 1;  // baseline estimation only

  static target::TrainConfig default_training() {
    target::TrainConfig t;
    t.steps = 150000;
    t.stale_interval = 200;
    return t;
  }
};

struct EmaiCurvePoint {
  std::int64_t env_steps = 0;
  std::int64_t episode = 0;
  double epsilon = 0.0;
  double episode_return = 0.0;  // environment reward only
  double mask_rate = 0.0;
  double loss_total = 0.0;
  double loss_td = 0.0;
  double loss_diff = 0.0;       // L_d before the lambda weight
};

std::string curve_to_csv(const std::vector<EmaiCurvePoint>& curve);

struct TrainedMasker {
  MaskingPolicy policy;
  BaselineReturn baseline;
  std::int64_t env_steps = 0;
  std::vector<EmaiCurvePoint> curve;
};

// Identifies the target in masking checkpoints.
std::string target_checksum(const target::TargetPolicy& target);

// Algorithm 1. The target is queried only through act(). If `baseline` is
// given it is used as J(pi), otherwise it is estimated first.
TrainedMasker train_emai(const target::TargetPolicy& target, envs::Environment& env, const EmaiConfig& cfg,
                         std::optional<BaselineReturn> baseline = std::nullopt);

}  // namespace emai::masking
