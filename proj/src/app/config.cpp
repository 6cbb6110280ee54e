#include "app/config.hpp"

#include "common/checksum.hpp"
#include "common/error.hpp"
#include "common/json_io.hpp"
#include "ctde/mixer.hpp"
#include "explain/explainer.hpp"
#include "explain/whitebox.hpp"

#include <cstdlib>

namespace emai::app {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json opt(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }

// Overlays user onto base, refusing keys the base does not have.
void merge_strict(json& base, const json& user, const std::string& where) {
  if (!user.is_object()) fail(ErrorCode::kConfig, "config: '" + where + "' must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!base.contains(it.key())) fail(ErrorCode::kConfig, "config: unknown key '" + key + "'");
    json& slot = base[it.key()];
    if (slot.is_object()) {
      merge_strict(slot, it.value(), key);
    } else {
      slot = it.value();
    }
  }
}

template <typename T>
T get(const json& j, const char* section, const char* key) {
  try {
    return j.at(section).at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::kConfig, std::string("config: '") + section + "." + key + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* section, const char* key) {
  if (j.at(section).at(key).is_null()) return std::nullopt;
  return get<T>(j, section, key);
}

template <typename T>
T get_top(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::kConfig, std::string("config: '") + key + "' has the wrong type");
  }
}

void check(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::kConfig, "config: " + what);
}

void validate(const RunConfig& c) {
  check(c.env.name == "spread" || c.env.name == "key_corridor", "env.name must be spread or key_corridor");
  check(c.env.diagnostic == "none" || c.env.diagnostic == "zero_reward" || c.env.diagnostic == "inert_agent",
        "env.diagnostic must be none, zero_reward or inert_agent");
  check(c.env.gamma > 0.0 && c.env.gamma <= 1.0, "env.gamma must lie in (0, 1]");
  check(c.target.kind == "scripted" || c.target.kind == "checkpoint", "target.kind must be scripted or checkpoint");
  explain::explainer_kind_from_string(c.explainer.kind);
  explain::grad_norm_from_string(c.explainer.grad_norm);
  check(c.explainer.oracle_rollouts >= 1, "explainer.oracle_rollouts must be >= 1");
  check(!c.training.steps || *c.training.steps >= 0, "training.steps must be >= 0");
  check(c.training.lr > 0.0, "training.lr must be > 0");
  check(!c.training.stale_interval || *c.training.stale_interval >= 1, "training.stale_interval must be >= 1");
  check(c.training.updates_per_episode >= 1, "training.updates_per_episode must be >= 1");
  check(c.training.buffer_episodes >= 1 && c.training.batch_episodes >= 1, "training buffer and batch must be >= 1");
  check(c.training.epsilon_anneal_steps >= 1, "training.epsilon_anneal_steps must be >= 1");
  ctde::mixer_kind_from_string(c.training.mixer);
  check(c.training.hidden >= 1 && c.training.mixer_embed >= 1, "training layer widths must be >= 1");
  check(!c.emai.beta || *c.emai.beta >= 0.0, "emai.beta must be >= 0");
  check(c.emai.lambda >= 0.0, "emai.lambda must be >= 0");
  check(c.emai.gamma > 0.0 && c.emai.gamma <= 1.0, "emai.gamma must lie in (0, 1]");
  check(c.emai.baseline_episodes >= 1, "emai.baseline_episodes must be >= 1");
  masking::diff_mode_from_string(c.emai.diff_mode);
  check(c.eval.episodes >= 1, "eval.episodes must be >= 1");
  check(c.eval.noise_eps >= 0.0, "eval.noise_eps must be >= 0");
  check(!c.eval.d_th || *c.eval.d_th >= 0.0, "eval.d_th must be >= 0");
  check(c.eval.quantile > 0.0 && c.eval.quantile <= 1.0, "eval.quantile must lie in (0, 1]");
  check(c.eval.harvest_episodes >= 10, "eval.harvest_episodes must be >= 10");
  check(c.workers >= 1, "workers must be >= 1");
}

}  // namespace

json default_config_json() { return config_to_json(RunConfig{}); }

json config_to_json(const RunConfig& c) {
  json j;
  j["env"] = {{"name", c.env.name}, {"n_agents", c.env.n_agents}, {"grid", c.env.grid},
              {"gamma", c.env.gamma}, {"diagnostic", c.env.diagnostic}};
  j["target"] = {{"kind", c.target.kind}, {"checkpoint", c.target.checkpoint}, {"weakened", c.target.weakened}};
  j["explainer"] = {{"kind", c.explainer.kind},
                    {"checkpoint", c.explainer.checkpoint},
                    {"oracle_rollouts", c.explainer.oracle_rollouts},
                    {"grad_norm", c.explainer.grad_norm}};
  const auto& t = c.training;
  j["training"] = {{"steps", opt(t.steps)},
                   {"lr", t.lr},
                   {"stale_interval", opt(t.stale_interval)},
                   {"buffer_episodes", t.buffer_episodes},
                   {"batch_episodes", t.batch_episodes},
                   {"epsilon_start", t.epsilon_start},
                   {"epsilon_end", t.epsilon_end},
                   {"epsilon_anneal_steps", t.epsilon_anneal_steps},
                   {"mixer", t.mixer},
                   {"hidden", t.hidden},
                   {"mixer_embed", t.mixer_embed},
                   {"grad_clip", t.grad_clip},
                   {"updates_per_episode", t.updates_per_episode}};
  j["emai"] = {{"beta", opt(c.emai.beta)},
               {"beta_scale", c.emai.beta_scale},
               {"lambda", c.emai.lambda},
               {"gamma", c.emai.gamma},
               {"baseline_episodes", c.emai.baseline_episodes},
               {"diff_mode", c.emai.diff_mode}};
  j["eval"] = {{"episodes", c.eval.episodes},
               {"noise_eps", c.eval.noise_eps},
               {"d_th", opt(c.eval.d_th)},
               {"quantile", c.eval.quantile},
               {"harvest_episodes", c.eval.harvest_episodes},
               {"record_episodes", c.eval.record_episodes},
               {"attack_all", c.eval.attack_all}};
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["output_dir"] = c.output_dir;
  return j;
}

RunConfig config_from_json(const json& user) {
  json j = default_config_json();
  merge_strict(j, user, "");
  RunConfig c;
  c.env.name = get<std::string>(j, "env", "name");
  c.env.n_agents = get<int>(j, "env", "n_agents");
  c.env.grid = get<int>(j, "env", "grid");
  c.env.gamma = get<double>(j, "env", "gamma");
  c.env.diagnostic = get<std::string>(j, "env", "diagnostic");
  c.target.kind = get<std::string>(j, "target", "kind");
  c.target.checkpoint = get<std::string>(j, "target", "checkpoint");
  c.target.weakened = get<bool>(j, "target", "weakened");
  c.explainer.kind = get<std::string>(j, "explainer", "kind");
  c.explainer.checkpoint = get<std::string>(j, "explainer", "checkpoint");
  c.explainer.oracle_rollouts = get<int>(j, "explainer", "oracle_rollouts");
  c.explainer.grad_norm = get<std::string>(j, "explainer", "grad_norm");
  auto& t = c.training;
  t.steps = get_opt<std::int64_t>(j, "training", "steps");
  t.lr = get<double>(j, "training", "lr");
  t.stale_interval = get_opt<std::int64_t>(j, "training", "stale_interval");
  t.buffer_episodes = get<std::size_t>(j, "training", "buffer_episodes");
  t.batch_episodes = get<std::size_t>(j, "training", "batch_episodes");
  t.epsilon_start = get<double>(j, "training", "epsilon_start");
  t.epsilon_end = get<double>(j, "training", "epsilon_end");
  t.epsilon_anneal_steps = get<std::int64_t>(j, "training", "epsilon_anneal_steps");
  t.mixer = get<std::string>(j, "training", "mixer");
  t.hidden = get<std::size_t>(j, "training", "hidden");
  t.mixer_embed = get<std::size_t>(j, "training", "mixer_embed");
  t.grad_clip = get<double>(j, "training", "grad_clip");
  t.updates_per_episode = get<std::size_t>(j, "training", "updates_per_episode");
  c.emai.beta = get_opt<double>(j, "emai", "beta");
  c.emai.beta_scale = get<double>(j, "emai", "beta_scale");
  c.emai.lambda = get<double>(j, "emai", "lambda");
  c.emai.gamma = get<double>(j, "emai", "gamma");
  c.emai.baseline_episodes = get<std::size_t>(j, "emai", "baseline_episodes");
  c.emai.diff_mode = get<std::string>(j, "emai", "diff_mode");
  c.eval.episodes = get<std::size_t>(j, "eval", "episodes");
  c.eval.noise_eps = get<double>(j, "eval", "noise_eps");
  c.eval.d_th = get_opt<double>(j, "eval", "d_th");
  c.eval.quantile = get<double>(j, "eval", "quantile");
  c.eval.harvest_episodes = get<std::size_t>(j, "eval", "harvest_episodes");
  c.eval.record_episodes = get<std::size_t>(j, "eval", "record_episodes");
  c.eval.attack_all = get<bool>(j, "eval", "attack_all");
  c.seed = get_top<std::uint64_t>(j, "seed");
  c.workers = get_top<int>(j, "workers");
  c.output_dir = get_top<std::string>(j, "output_dir");
  try {
    validate(c);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    fail(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
  return c;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  check(eq != std::string::npos && eq > 0, "override '" + assignment + "' is not key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    check(!key.empty(), "override '" + assignment + "' has an empty key");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    json& next = (*node)[key];
    if (next.is_null()) next = json::object();
    check(next.is_object(), "override '" + assignment + "' descends into a non-object");
    node = &next;
    start = dot + 1;
  }
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  json j = json::object();
  std::string name = "default";
  if (!path.empty()) {
    if (!std::filesystem::exists(path)) fail(ErrorCode::kConfig, "config file not found: " + path.string());
    try {
      j = read_json_file(path);
    } catch (const Error& e) {
      fail(ErrorCode::kConfig, std::string("config: ") + e.what());
    }
    name = path.stem().string();
  }
  for (const auto& o : overrides) apply_override(j, o);
  RunConfig c = config_from_json(j);
  if (c.output_dir.empty()) {
    const char* root = std::getenv("EMAI_OUTPUT_ROOT");
    c.output_dir = (std::filesystem::path(root && *root ? root : "emai_runs") / name).string();
  }
  const std::filesystem::path out = c.output_dir;
  if (c.target.kind == "checkpoint" && c.target.checkpoint.empty())
    c.target.checkpoint = (out / "train-target" / "target.json").string();
  else if (c.target.kind == "checkpoint" && !std::filesystem::exists(c.target.checkpoint))
    fail(ErrorCode::kMissingArtifact, "target checkpoint not found: " + c.target.checkpoint);
  if (c.explainer.kind == "emai" && c.explainer.checkpoint.empty())
    c.explainer.checkpoint = (out / "train-emai" / "masker.json").string();
  else if (!c.explainer.checkpoint.empty() && !std::filesystem::exists(c.explainer.checkpoint))
    fail(ErrorCode::kMissingArtifact, "explainer checkpoint not found: " + c.explainer.checkpoint);
  return c;
}

target::TrainConfig target_train_config(const RunConfig& c, const target::TrainConfig& defaults) {
  target::TrainConfig t = defaults;
  t.steps = c.training.steps.value_or(defaults.steps);
  t.lr = c.training.lr;
  t.stale_interval = c.training.stale_interval.value_or(defaults.stale_interval);
  t.updates_per_episode = c.training.updates_per_episode;
  t.buffer_episodes = c.training.buffer_episodes;
  t.batch_episodes = c.training.batch_episodes;
  t.epsilon.start = c.training.epsilon_start;
  t.epsilon.end = c.training.epsilon_end;
  t.epsilon.anneal_steps = c.training.epsilon_anneal_steps;
  t.mixer = ctde::mixer_kind_from_string(c.training.mixer);
  t.hidden = c.training.hidden;
  t.mixer_embed = c.training.mixer_embed;
  t.grad_clip = c.training.grad_clip;
  t.seed = c.seed;
  return t;
}

masking::EmaiConfig emai_config(const RunConfig& c) {
  masking::EmaiConfig e;
  e.beta = c.emai.beta;
  e.beta_scale = c.emai.beta_scale;
  e.lambda = c.emai.lambda;
  e.gamma = c.emai.gamma;
  e.baseline_episodes = c.emai.baseline_episodes;
  e.diff_mode = masking::diff_mode_from_string(c.emai.diff_mode);
  e.training = target_train_config(c, masking::EmaiConfig::default_training());
  e.workers = c.workers;
  return e;
}

std::string config_hash(const RunConfig& c) { return sha256_hex(config_to_json(c).dump()); }

}  // namespace emai::app
