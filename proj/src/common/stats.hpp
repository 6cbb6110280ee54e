#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace emai {

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;
};

MeanStderr mean_stderr(std::span<const double> values);

// Sample covariance of paired values divided by n (covariance of the means).
double covariance_of_means(std::span<const double> a, std::span<const double> b);

// Pearson chi-square goodness of fit against the uniform distribution.
// Returns the upper-tail p-value.
double chi_square_uniform_pvalue(std::span<const std::size_t> counts);

double combined_stderr(double a, double b);

}  // namespace emai
