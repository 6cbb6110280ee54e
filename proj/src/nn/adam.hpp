#pragma once

#include "nn/tensor.hpp"

#include <cstdint>
#include <vector>

namespace emai::nn {

struct AdamConfig {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adaptive-moment gradient descent over a fixed parameter list.
class Adam {
 public:
  Adam(AdamConfig cfg, std::vector<Tensor> params);

  // Applies one update from the parameters' current gradients. Rejects
  // non-finite gradients before touching any parameter.
  void step();
  void zero_grad();

  std::int64_t steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }
  std::vector<Tensor>& parameters() { return params_; }

 private:
  AdamConfig cfg_;
  std::vector<Tensor> params_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::int64_t t_ = 0;
};

// Rescales gradients so their global L2 norm is at most max_norm. Returns the
// norm before clipping.
double clip_grad_norm(std::vector<Tensor>& params, double max_norm);

}  // namespace emai::nn
