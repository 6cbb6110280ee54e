#pragma once

#include "common/rng.hpp"
#include "envs/action_space.hpp"

#include <span>
#include <vector>

namespace emai::masking {

inline constexpr int kKeep = 0;
inline constexpr int kMask = 1;

// Per-agent mask bits: 0 keeps the target's action, 1 randomizes it.
class MaskAction {
 public:
  MaskAction() = default;
  explicit MaskAction(std::vector<int> bits);

  static MaskAction none(std::size_t n) { return MaskAction(std::vector<int>(n, kKeep)); }
  static MaskAction all(std::size_t n) { return MaskAction(std::vector<int>(n, kMask)); }
  // Masks only `agent`.
  static MaskAction single(std::size_t n, std::size_t agent);

  std::size_t size() const { return bits_.size(); }
  bool masked(std::size_t i) const { return bits_[i] == kMask; }
  int count() const;
  std::span<const int> bits() const { return bits_; }

 private:
  std::vector<int> bits_;
};

// keep -> a; mask -> a fresh uniform draw from the action space (resampled on
// every masked step, never held).
envs::Action apply_mask(const envs::Action& a, int mask_bit, const envs::ActionSpace& space, Rng& rng);
int apply_mask(int a, int mask_bit, const envs::ActionSpace& space, Rng& rng);

// Final joint action for a discrete environment. Draws only for masked agents.
std::vector<int> compose_actions(std::span<const int> target_actions, const MaskAction& mask,
                                 const envs::ActionSpace& space, Rng& rng);

// beta * number of masked agents.
double masking_reward(const MaskAction& mask, double beta);

}  // namespace emai::masking
