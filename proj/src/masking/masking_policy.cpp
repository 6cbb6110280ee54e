#include "masking/masking_policy.hpp"

#include "common/error.hpp"
#include "ctde/checkpoint.hpp"

namespace emai::masking {

MaskingPolicy::MaskingPolicy(std::string env_name, ctde::AgentQNet net, ctde::Mixer mixer, MaskingParams params)
    : env_name_(std::move(env_name)), net_(std::move(net)), mixer_(std::move(mixer)), params_(std::move(params)) {
  require(net_.n_actions() == 2, ErrorCode::kInvalidArgument, "masking network must have exactly two actions");
  require(params_.beta >= 0.0, ErrorCode::kConfig, "emai.beta must be >= 0");
  require(params_.lambda >= 0.0, ErrorCode::kConfig, "emai.lambda must be >= 0");
}

std::vector<ImportanceScore> MaskingPolicy::importance(const envs::Observations& obs) const {
  require(obs.size() == net_.n_agents(), ErrorCode::kInvalidArgument,
          "importance: expected " + std::to_string(net_.n_agents()) + " observations, got " +
              std::to_string(obs.size()));
  std::vector<double> flat;
  flat.reserve(obs.size() * net_.obs_dim());
  for (const auto& o : obs) {
    require(o.size() == net_.obs_dim(), ErrorCode::kInvalidArgument, "importance: observation length mismatch");
    flat.insert(flat.end(), o.begin(), o.end());
  }
  const nn::Tensor q = net_.forward(net_.make_inputs(flat, obs.size()));
  std::vector<ImportanceScore> out;
  out.reserve(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) out.push_back(importance_from_q(q.at(i, kKeep), q.at(i, kMask)));
  return out;
}

MaskAction MaskingPolicy::greedy_mask(const envs::Observations& obs) const {
  const auto scores = importance(obs);
  std::vector<int> bits(scores.size());
  // argmax over (keep, mask) with ties to keep.
  for (std::size_t i = 0; i < scores.size(); ++i) bits[i] = scores[i].gap < 0.0 ? kMask : kKeep;
  return MaskAction(std::move(bits));
}

void MaskingPolicy::save(const std::filesystem::path& path, std::int64_t training_step) const {
  ctde::CheckpointHeader h;
  h.kind = "masking";
  h.env = env_name_;
  h.n_agents = net_.n_agents();
  h.obs_dim = net_.obs_dim();
  h.n_actions = 2;
  h.mixer = ctde::to_string(mixer_.kind());
  h.training_step = training_step;
  h.extra = {{"beta", params_.beta},
             {"lambda", params_.lambda},
             {"gamma", params_.gamma},
             {"j_pi", params_.j_pi},
             {"j_pi_stderr", params_.j_pi_stderr},
             {"target_checksum", params_.target_checksum},
             {"diff_mode", params_.diff_mode}};
  ctde::save_checkpoint(path, h, net_, mixer_);
}

MaskingPolicy MaskingPolicy::load(const std::filesystem::path& path) {
  ctde::Checkpoint ck = ctde::load_checkpoint(path);
  require(ck.header.kind == "masking", ErrorCode::kIncompatible,
          "checkpoint " + path.string() + " is a '" + ck.header.kind + "' checkpoint, expected 'masking'");
  MaskingParams p;
  try {
    const auto& x = ck.header.extra;
    p.beta = x.at("beta").get<double>();
    p.lambda = x.at("lambda").get<double>();
    p.gamma = x.at("gamma").get<double>();
    p.j_pi = x.at("j_pi").get<double>();
    p.j_pi_stderr = x.at("j_pi_stderr").get<double>();
    p.target_checksum = x.at("target_checksum").get<std::string>();
    p.diff_mode = x.value("diff_mode", std::string("literal"));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, "masking checkpoint " + path.string() + ": " + e.what());
  }
  return MaskingPolicy(ck.header.env, std::move(ck.net), std::move(ck.mixer), std::move(p));
}

}  // namespace emai::masking
