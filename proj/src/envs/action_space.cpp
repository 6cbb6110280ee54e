#include "envs/action_space.hpp"

#include "common/error.hpp"

#include <string>

namespace emai::envs {

ActionSpace::ActionSpace(Discrete d) : kind_(d) {
  require(d.count >= 2, ErrorCode::kInvalidArgument,
          "discrete action space needs at least 2 actions, got " + std::to_string(d.count));
}

ActionSpace::ActionSpace(Continuous c) : kind_(c) {
  const auto& b = std::get<Continuous>(kind_);
  require(!b.lb.empty() && b.lb.size() == b.ub.size(), ErrorCode::kInvalidArgument,
          "continuous action space bounds must be non-empty and of equal length");
  for (std::size_t i = 0; i < b.lb.size(); ++i) {
    require(b.lb[i] < b.ub[i], ErrorCode::kInvalidArgument,
            "continuous action space needs lb < ub in dimension " + std::to_string(i));
  }
}

int ActionSpace::count() const {
  require(is_discrete(), ErrorCode::kInvalidArgument, "count() on a continuous action space");
  return std::get<Discrete>(kind_).count;
}

const Continuous& ActionSpace::bounds() const {
  require(!is_discrete(), ErrorCode::kInvalidArgument, "bounds() on a discrete action space");
  return std::get<Continuous>(kind_);
}

bool ActionSpace::contains(const Action& a) const {
  if (is_discrete()) {
    const int* idx = std::get_if<int>(&a);
    return idx != nullptr && *idx >= 0 && *idx < count();
  }
  const auto* v = std::get_if<std::vector<double>>(&a);
  const auto& b = bounds();
  if (v == nullptr || v->size() != b.lb.size()) return false;
  for (std::size_t i = 0; i < v->size(); ++i) {
    if ((*v)[i] < b.lb[i] || (*v)[i] > b.ub[i]) return false;
  }
  return true;
}

Action random_action(const ActionSpace& space, Rng& rng) {
  if (space.is_discrete()) return uniform_index(rng, space.count());
  const auto& b = space.bounds();
  std::vector<double> out(b.lb.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::uniform_real_distribution<double>(b.lb[i], b.ub[i])(rng);
  }
  return out;
}

}  // namespace emai::envs
