#include "masking/importance.hpp"

#include "common/error.hpp"

#include <cmath>

namespace emai::masking {

ImportanceScore importance_from_q(double q_keep, double q_mask) {
  const double gap = q_keep - q_mask;
  require(std::isfinite(gap), ErrorCode::kNumeric, "importance: non-finite Q gap");
  // Stable logistic for either sign of the gap.
  const double p = gap >= 0.0 ? std::exp(-gap) / (1.0 + std::exp(-gap)) : 1.0 / (1.0 + std::exp(gap));
  return {gap, p};
}

std::size_t most_critical(std::span<const ImportanceScore> scores) {
  require(!scores.empty(), ErrorCode::kInvalidArgument, "most_critical: no scores");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].gap > scores[best].gap) best = i;
  }
  return best;
}

std::vector<double> gaps(std::span<const ImportanceScore> scores) {
  std::vector<double> out;
  out.reserve(scores.size());
  for (const auto& s : scores) out.push_back(s.gap);
  return out;
}

}  // namespace emai::masking
