#pragma once

#include "common/rng.hpp"
#include "nn/tensor.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace emai::nn {

enum class Activation { kRelu, kElu, kIdentity };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

// Fully connected network; activations[i] follows linear layer i.
// Weights are stored [fan_in x fan_out] so a row batch maps as x W + b.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<std::size_t> layer_sizes, std::vector<Activation> activations, Rng& rng);

  // Copies are deep: parameters never alias between instances.
  Mlp(const Mlp& other);
  Mlp& operator=(const Mlp& other);
  Mlp(Mlp&&) noexcept = default;
  Mlp& operator=(Mlp&&) noexcept = default;

  Tensor forward(const Tensor& input) const;

  std::vector<Tensor>& parameters() { return params_; }
  const std::vector<Tensor>& parameters() const { return params_; }
  std::size_t parameter_count() const;

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  const std::vector<Activation>& activations() const { return acts_; }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }

  void copy_values_from(const Mlp& other);
  void set_requires_grad(bool on);
  void fill(double value);

  nlohmann::json to_json() const;
  static Mlp from_json(const nlohmann::json& j);

 private:
  std::vector<std::size_t> sizes_;
  std::vector<Activation> acts_;
  std::vector<Tensor> params_;  // W0, b0, W1, b1, ...
};

}  // namespace emai::nn
