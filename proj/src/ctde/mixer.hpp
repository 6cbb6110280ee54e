#pragma once

#include "common/rng.hpp"
#include "nn/mlp.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>

namespace emai::ctde {

enum class MixerKind { kVdn, kMonotonic };

std::string to_string(MixerKind k);
MixerKind mixer_kind_from_string(const std::string& s);

// Combines chosen per-agent Q values into Q_tot.
//   VDN:       Q_tot = sum_i q_i
//   Monotonic: Q_tot = W2^T elu(W1^T q + b1) + b2, with W1 = |H_w1(s)|, W2 = |H_w2(s)|
// Absolute-valued hypernetwork weights make Q_tot non-decreasing in every q_i.
class Mixer {
 public:
  Mixer() = default;
  Mixer(MixerKind kind, std::size_t n_agents, std::size_t state_dim, std::size_t embed,
        std::size_t hidden, Rng& rng);

  MixerKind kind() const { return kind_; }
  std::size_t n_agents() const { return n_agents_; }
  std::size_t state_dim() const { return state_dim_; }
  std::size_t embed() const { return embed_; }

  // chosen_q [B x n], states [B x state_dim] -> [B x 1]
  nn::Tensor forward(const nn::Tensor& chosen_q, const nn::Tensor& states) const;
  double q_total(std::span<const double> state, std::span<const double> chosen_q) const;

  std::vector<nn::Tensor> parameters() const;
  void copy_values_from(const Mixer& other);
  void set_requires_grad(bool on);

  nlohmann::json to_json() const;
  static Mixer from_json(const nlohmann::json& j);

 private:
  MixerKind kind_ = MixerKind::kVdn;
  std::size_t n_agents_ = 0;
  std::size_t state_dim_ = 0;
  std::size_t embed_ = 0;
  nn::Mlp hyper_w_;  // state -> n * embed (W1) ++ embed (W2)
  nn::Mlp hyper_b_;  // state -> embed (b1) ++ 1 (b2)
};

}  // namespace emai::ctde
