#include "masking/mask.hpp"

#include "common/error.hpp"

#include <algorithm>

namespace emai::masking {

MaskAction::MaskAction(std::vector<int> bits) : bits_(std::move(bits)) {
  for (int b : bits_) {
    require(b == kKeep || b == kMask, ErrorCode::kInvalidArgument,
            "mask bits must be 0 or 1, got " + std::to_string(b));
  }
}

MaskAction MaskAction::single(std::size_t n, std::size_t agent) {
  require(agent < n, ErrorCode::kInvalidArgument, "mask: agent index out of range");
  std::vector<int> bits(n, kKeep);
  bits[agent] = kMask;
  return MaskAction(std::move(bits));
}

int MaskAction::count() const { return static_cast<int>(std::count(bits_.begin(), bits_.end(), kMask)); }

envs::Action apply_mask(const envs::Action& a, int mask_bit, const envs::ActionSpace& space, Rng& rng) {
  require(space.contains(a), ErrorCode::kInvalidArgument, "apply_mask: action outside the action space");
  require(mask_bit == kKeep || mask_bit == kMask, ErrorCode::kInvalidArgument, "apply_mask: mask bit must be 0 or 1");
  if (mask_bit == kKeep) return a;
  return envs::random_action(space, rng);
}

int apply_mask(int a, int mask_bit, const envs::ActionSpace& space, Rng& rng) {
  return std::get<int>(apply_mask(envs::Action{a}, mask_bit, space, rng));
}

std::vector<int> compose_actions(std::span<const int> target_actions, const MaskAction& mask,
                                 const envs::ActionSpace& space, Rng& rng) {
  require(target_actions.size() == mask.size(), ErrorCode::kInvalidArgument,
          "compose_actions: mask length does not match the joint action");
  std::vector<int> out(target_actions.begin(), target_actions.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = apply_mask(out[i], mask.bits()[i], space, rng);
  return out;
}

double masking_reward(const MaskAction& mask, double beta) { return beta * mask.count(); }

}  // namespace emai::masking
