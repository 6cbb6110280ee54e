#pragma once

#include "nn/tensor.hpp"

#include <functional>
#include <vector>

namespace emai::nn {

// Compares reverse-mode gradients of a scalar loss against central finite
// differences. Returns max |analytic - numeric| / max(1e-8, |analytic| + |numeric|)
// over every parameter element. Parameter values are restored on return.
double grad_check(const std::function<Tensor()>& loss_fn, std::vector<Tensor>& params,
                  double epsilon = 1e-4);

}  // namespace emai::nn
