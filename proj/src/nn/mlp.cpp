#include "nn/mlp.hpp"

#include "common/error.hpp"

#include <cmath>

namespace emai::nn {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kElu: return "elu";
    case Activation::kIdentity: return "identity";
  }
  return "identity";
}

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "elu") return Activation::kElu;
  if (s == "identity") return Activation::kIdentity;
  fail(ErrorCode::kParse, "unknown activation '" + s + "'");
}

Mlp::Mlp(std::vector<std::size_t> layer_sizes, std::vector<Activation> activations, Rng& rng)
    : sizes_(std::move(layer_sizes)), acts_(std::move(activations)) {
  require(sizes_.size() >= 2, ErrorCode::kInvalidArgument, "mlp needs at least input and output sizes");
  require(acts_.size() == sizes_.size() - 1, ErrorCode::kInvalidArgument,
          "mlp needs one activation per linear layer");
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const std::size_t in = sizes_[l], out = sizes_[l + 1];
    require(in > 0 && out > 0, ErrorCode::kInvalidArgument, "mlp layer sizes must be positive");
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::vector<double> w(in * out), b(out);
    for (double& v : w) v = dist(rng);
    for (double& v : b) v = dist(rng);
    params_.emplace_back(in, out, std::move(w), true);
    params_.emplace_back(1, out, std::move(b), true);
  }
}

Mlp::Mlp(const Mlp& other) : sizes_(other.sizes_), acts_(other.acts_) {
  params_.reserve(other.params_.size());
  for (const Tensor& p : other.params_) params_.push_back(p.clone());
}

Mlp& Mlp::operator=(const Mlp& other) {
  if (this != &other) {
    Mlp tmp(other);
    *this = std::move(tmp);
  }
  return *this;
}

Tensor Mlp::forward(const Tensor& input) const {
  require(input.cols() == sizes_.front(), ErrorCode::kInvalidArgument,
          "mlp forward: input " + input.shape_str() + " does not match first layer size " +
              std::to_string(sizes_.front()) + " (expected [batch x " + std::to_string(sizes_.front()) + "])");
  Tensor h = input;
  for (std::size_t l = 0; l < acts_.size(); ++l) {
    h = add_row(matmul(h, params_[2 * l]), params_[2 * l + 1]);
    switch (acts_[l]) {
      case Activation::kRelu: h = relu(h); break;
      case Activation::kElu: h = elu(h); break;
      case Activation::kIdentity: break;
    }
  }
  return h;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const Tensor& p : params_) n += p.size();
  return n;
}

void Mlp::copy_values_from(const Mlp& other) {
  require(other.sizes_ == sizes_, ErrorCode::kInvalidArgument, "mlp copy: layer sizes differ");
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto dst = params_[i].mutable_data();
    auto src = other.params_[i].data();
    std::copy(src.begin(), src.end(), dst.begin());
  }
}

void Mlp::set_requires_grad(bool on) {
  for (Tensor& p : params_) p.set_requires_grad(on);
}

void Mlp::fill(double value) {
  for (Tensor& p : params_) {
    for (double& v : p.mutable_data()) v = value;
  }
}

nlohmann::json Mlp::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t l = 0; l < acts_.size(); ++l) {
    const Tensor& w = params_[2 * l];
    const Tensor& b = params_[2 * l + 1];
    layers.push_back({
        {"activation", to_string(acts_[l])},
        {"weight", {{"shape", w.shape()}, {"values", std::vector<double>(w.data().begin(), w.data().end())}}},
        {"bias", {{"shape", b.shape()}, {"values", std::vector<double>(b.data().begin(), b.data().end())}}},
    });
  }
  return {{"layer_sizes", sizes_}, {"layers", layers}};
}

Mlp Mlp::from_json(const nlohmann::json& j) {
  try {
    Mlp m;
    m.sizes_ = j.at("layer_sizes").get<std::vector<std::size_t>>();
    const auto& layers = j.at("layers");
    require(m.sizes_.size() >= 2 && layers.size() == m.sizes_.size() - 1, ErrorCode::kParse,
            "mlp checkpoint: layer count does not match layer_sizes");
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const auto& layer = layers[l];
      m.acts_.push_back(activation_from_string(layer.at("activation").get<std::string>()));
      for (const char* key : {"weight", "bias"}) {
        const auto shape = layer.at(key).at("shape").get<std::vector<std::size_t>>();
        const std::vector<std::size_t> expected =
            std::string(key) == "weight" ? std::vector<std::size_t>{m.sizes_[l], m.sizes_[l + 1]}
                                         : std::vector<std::size_t>{1, m.sizes_[l + 1]};
        require(shape == expected, ErrorCode::kParse,
                "mlp checkpoint: layer " + std::to_string(l) + " " + key + " has the wrong shape");
        m.params_.emplace_back(shape[0], shape[1], layer.at(key).at("values").get<std::vector<double>>(), true);
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("mlp checkpoint: ") + e.what());
  }
}

}  // namespace emai::nn
