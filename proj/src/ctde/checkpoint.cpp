#include "ctde/checkpoint.hpp"

#include "common/error.hpp"
#include "common/json_io.hpp"

namespace emai::ctde {

nlohmann::json checkpoint_to_json(const CheckpointHeader& h, const AgentQNet& net, const Mixer& mixer) {
  nlohmann::json header = h.extra;
  header["kind"] = h.kind;
  header["env"] = h.env;
  header["n_agents"] = h.n_agents;
  header["obs_dim"] = h.obs_dim;
  header["n_actions"] = h.n_actions;
  header["mixer"] = h.mixer;
  header["training_step"] = h.training_step;
  return {{"format", "emai-checkpoint"},
          {"version", kCheckpointVersion},
          {"header", header},
          {"agent_net", net.mlp().to_json()},
          {"mixer", mixer.to_json()}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  try {
    require(j.at("format").get<std::string>() == "emai-checkpoint", ErrorCode::kParse,
            "checkpoint: unexpected format tag");
    require(j.at("version").get<int>() == kCheckpointVersion, ErrorCode::kParse,
            "checkpoint: unsupported version " + j.at("version").dump());
    const auto& hj = j.at("header");
    CheckpointHeader h;
    h.kind = hj.at("kind").get<std::string>();
    h.env = hj.at("env").get<std::string>();
    h.n_agents = hj.at("n_agents").get<std::size_t>();
    h.obs_dim = hj.at("obs_dim").get<std::size_t>();
    h.n_actions = hj.at("n_actions").get<std::size_t>();
    h.mixer = hj.at("mixer").get<std::string>();
    h.training_step = hj.at("training_step").get<std::int64_t>();
    h.extra = hj;
    for (const char* k : {"kind", "env", "n_agents", "obs_dim", "n_actions", "mixer", "training_step"}) {
      h.extra.erase(k);
    }
    AgentQNet net(h.obs_dim, h.n_agents, nn::Mlp::from_json(j.at("agent_net")));
    require(net.n_actions() == h.n_actions, ErrorCode::kParse, "checkpoint: n_actions does not match network");
    Mixer mixer = Mixer::from_json(j.at("mixer"));
    require(mixer.n_agents() == h.n_agents, ErrorCode::kParse, "checkpoint: mixer agent count mismatch");
    return {std::move(h), std::move(net), std::move(mixer)};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                     const AgentQNet& net, const Mixer& mixer) {
  write_json_file(path, checkpoint_to_json(header, net, mixer));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::kMissingArtifact, "checkpoint not found: " + path.string());
  return checkpoint_from_json(read_json_file(path));
}

}  // namespace emai::ctde
