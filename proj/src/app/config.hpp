#pragma once

#include "envs/factory.hpp"
#include "masking/trainer.hpp"
#include "target/trainer.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace emai::app {

struct TargetSection {
  std::string kind = "scripted";  // scripted | checkpoint
  std::string checkpoint;         // empty: <output_dir>/train-target/target.json
  bool weakened = false;          // scripted key_corridor only
};

struct ExplainerSection {
  std::string kind = "emai";
  std::string checkpoint;  // emai; empty: <output_dir>/train-emai/masker.json
  int oracle_rollouts = 64;
  std::string grad_norm = "l1";
};

struct TrainingSection {
  std::optional<std::int64_t> steps;  // unset: 100000 for the target, 150000 for the masker
  double lr = 5e-4;
  std::optional<std::int64_t> stale_interval;  // unset: 5000 for the target, 200 for the masker
  std::size_t buffer_episodes = 2000;
  std::size_t batch_episodes = 32;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  std::int64_t epsilon_anneal_steps = 50000;
  std::string mixer = "monotonic";
  std::size_t hidden = 64;
  std::size_t mixer_embed = 32;
  double grad_clip = 10.0;
  std::size_t updates_per_episode = 1;
};

struct EmaiSection {
  std::optional<double> beta;
  double beta_scale = 0.02;
  double lambda = 1.0;
  double gamma = 0.99;
  std::size_t baseline_episodes = 500;
  std::string diff_mode = "realized";
};

struct EvalSection {
  std::size_t episodes = 500;
  double noise_eps = 0.5;
  std::optional<double> d_th;  // unset: 0.05 * obs_dim
  double quantile = 0.1;
  std::size_t harvest_episodes = 500;
  std::size_t record_episodes = 3;
  bool attack_all = false;
};

struct RunConfig {
  envs::EnvConfig env;
  TargetSection target;
  ExplainerSection explainer;
  TrainingSection training;
  EmaiSection emai;
  EvalSection eval;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output_dir;  // empty: $EMAI_OUTPUT_ROOT (or ./emai_runs) / <config name>
};

// Every key with its default value.
nlohmann::json default_config_json();

// Applies "a.b.c=value" to j; value is read as JSON when it parses, else as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

// Strict: unknown keys and wrong types raise ErrorCode::kConfig.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

// Reads the file (or the defaults when path is empty), applies overrides,
// validates, and fills output_dir.
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides);

// Unset optional fields take their values from defaults.
target::TrainConfig target_train_config(const RunConfig& cfg, const target::TrainConfig& defaults);
masking::EmaiConfig emai_config(const RunConfig& cfg);

// sha256 of the canonical JSON form.
std::string config_hash(const RunConfig& cfg);

}  // namespace emai::app
