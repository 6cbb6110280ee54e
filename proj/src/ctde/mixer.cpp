#include "ctde/mixer.hpp"

#include "common/error.hpp"

namespace emai::ctde {

using nn::Activation;
using nn::Tensor;

std::string to_string(MixerKind k) { return k == MixerKind::kVdn ? "vdn" : "monotonic"; }

MixerKind mixer_kind_from_string(const std::string& s) {
  if (s == "vdn") return MixerKind::kVdn;
  if (s == "monotonic" || s == "qmix") return MixerKind::kMonotonic;
  fail(ErrorCode::kConfig, "unknown mixer kind '" + s + "' (expected vdn or monotonic)");
}

Mixer::Mixer(MixerKind kind, std::size_t n_agents, std::size_t state_dim, std::size_t embed,
             std::size_t hidden, Rng& rng)
    : kind_(kind), n_agents_(n_agents), state_dim_(state_dim), embed_(embed) {
  if (kind_ == MixerKind::kMonotonic) {
    hyper_w_ = nn::Mlp({state_dim, hidden, n_agents * embed + embed},
                       {Activation::kRelu, Activation::kIdentity}, rng);
    hyper_b_ = nn::Mlp({state_dim, hidden, embed + 1}, {Activation::kRelu, Activation::kIdentity}, rng);
  }
}

Tensor Mixer::forward(const Tensor& chosen_q, const Tensor& states) const {
  require(chosen_q.cols() == n_agents_, ErrorCode::kInvalidArgument,
          "mixer: chosen_q " + chosen_q.shape_str() + " needs " + std::to_string(n_agents_) + " columns");
  if (kind_ == MixerKind::kVdn) {
    Tensor ones(n_agents_, 1, std::vector<double>(n_agents_, 1.0));
    return nn::matmul(chosen_q, ones);
  }
  require(states.rows() == chosen_q.rows() && states.cols() == state_dim_, ErrorCode::kInvalidArgument,
          "mixer: states " + states.shape_str() + " do not match chosen_q " + chosen_q.shape_str());
  const std::size_t ne = n_agents_ * embed_;
  const Tensor hw = hyper_w_.forward(states);
  const Tensor hb = hyper_b_.forward(states);
  const Tensor w1 = nn::abs(nn::slice_cols(hw, 0, ne));
  const Tensor w2 = nn::abs(nn::slice_cols(hw, ne, ne + embed_));
  const Tensor b1 = nn::slice_cols(hb, 0, embed_);
  const Tensor b2 = nn::slice_cols(hb, embed_, embed_ + 1);
  const Tensor hidden = nn::elu(nn::rowwise_vecmat(chosen_q, w1, embed_) + b1);
  return nn::row_dot(hidden, w2) + b2;
}

double Mixer::q_total(std::span<const double> state, std::span<const double> chosen_q) const {
  require(chosen_q.size() == n_agents_, ErrorCode::kInvalidArgument, "mixer: chosen_q length mismatch");
  Tensor q(1, n_agents_, std::vector<double>(chosen_q.begin(), chosen_q.end()));
  Tensor s(1, state.size(), std::vector<double>(state.begin(), state.end()));
  return forward(q, s).item();
}

std::vector<Tensor> Mixer::parameters() const {
  std::vector<Tensor> out;
  if (kind_ == MixerKind::kMonotonic) {
    out = hyper_w_.parameters();
    out.insert(out.end(), hyper_b_.parameters().begin(), hyper_b_.parameters().end());
  }
  return out;
}

void Mixer::copy_values_from(const Mixer& other) {
  require(other.kind_ == kind_, ErrorCode::kInvalidArgument, "mixer copy: kinds differ");
  if (kind_ == MixerKind::kMonotonic) {
    hyper_w_.copy_values_from(other.hyper_w_);
    hyper_b_.copy_values_from(other.hyper_b_);
  }
}

void Mixer::set_requires_grad(bool on) {
  hyper_w_.set_requires_grad(on);
  hyper_b_.set_requires_grad(on);
}

nlohmann::json Mixer::to_json() const {
  nlohmann::json j = {{"kind", to_string(kind_)},
                      {"n_agents", n_agents_},
                      {"state_dim", state_dim_},
                      {"embed", embed_}};
  if (kind_ == MixerKind::kMonotonic) {
    j["hyper_w"] = hyper_w_.to_json();
    j["hyper_b"] = hyper_b_.to_json();
  }
  return j;
}

Mixer Mixer::from_json(const nlohmann::json& j) {
  try {
    Mixer m;
    m.kind_ = mixer_kind_from_string(j.at("kind").get<std::string>());
    m.n_agents_ = j.at("n_agents").get<std::size_t>();
    m.state_dim_ = j.at("state_dim").get<std::size_t>();
    m.embed_ = j.at("embed").get<std::size_t>();
    if (m.kind_ == MixerKind::kMonotonic) {
      m.hyper_w_ = nn::Mlp::from_json(j.at("hyper_w"));
      m.hyper_b_ = nn::Mlp::from_json(j.at("hyper_b"));
      require(m.hyper_w_.input_size() == m.state_dim_ &&
                  m.hyper_w_.output_size() == m.n_agents_ * m.embed_ + m.embed_ &&
                  m.hyper_b_.output_size() == m.embed_ + 1,
              ErrorCode::kParse, "mixer checkpoint: hypernetwork shapes are inconsistent");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("mixer checkpoint: ") + e.what());
  }
}

}  // namespace emai::ctde
