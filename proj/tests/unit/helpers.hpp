#pragma once

#include <cstddef>
#include <vector>

namespace testing {

// Pearson statistic against a uniform expectation.
inline double chi_square_stat(const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return stat;
}

// Upper 1% points of the chi-square distribution, indexed by degrees of freedom.
inline double chi_square_crit_01(std::size_t df) {
  static const double table[] = {0.0, 6.635, 9.210, 11.345, 13.277, 15.086, 16.812, 18.475};
  return table[df];
}

}  // namespace testing
