#pragma once

#include <span>
#include <vector>

namespace emai::masking {

// gap = Q(keep) - Q(mask); mask_prob = softmax(Q)[mask] = 1 / (1 + e^gap).
struct ImportanceScore {
  double gap = 0.0;
  double mask_prob = 0.5;
};

ImportanceScore importance_from_q(double q_keep, double q_mask);

// Argmax of gap, lowest index on ties.
std::size_t most_critical(std::span<const ImportanceScore> scores);
std::vector<double> gaps(std::span<const ImportanceScore> scores);

}  // namespace emai::masking
