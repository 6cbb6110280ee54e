#include "nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace emai::nn {

double grad_check(const std::function<Tensor()>& loss_fn, std::vector<Tensor>& params,
                  double epsilon) {
  for (Tensor& p : params) p.zero_grad();
  loss_fn().backward();
  std::vector<std::vector<double>> analytic;
  for (const Tensor& p : params) analytic.emplace_back(p.grad().begin(), p.grad().end());

  double worst = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto w = params[k].mutable_data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double orig = w[i];
      w[i] = orig + epsilon;
      const double up = loss_fn().item();
      w[i] = orig - epsilon;
      const double down = loss_fn().item();
      w[i] = orig;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double a = analytic[k][i];
      const double err = std::fabs(a - numeric) / std::max(1e-8, std::fabs(a) + std::fabs(numeric));
      worst = std::max(worst, err);
    }
  }
  for (Tensor& p : params) p.zero_grad();
  return worst;
}

}  // namespace emai::nn
