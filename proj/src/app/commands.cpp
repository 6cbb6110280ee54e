#include "app/commands.hpp"

#include "common/checksum.hpp"
#include "common/error.hpp"
#include "common/json_io.hpp"
#include "common/rng.hpp"
#include "envs/factory.hpp"
#include "eval/harness.hpp"
#include "eval/rollout.hpp"
#include "explain/factory.hpp"
#include "masking/trainer.hpp"
#include "replay/render.hpp"
#include "replay/serialize.hpp"
#include "target/learned.hpp"
#include "target/scripted.hpp"

#include <cstdio>
#include <map>

namespace emai::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Collects outputs of one command and writes the manifest last.
class Output {
 public:
  Output(const RunConfig& cfg, std::string command) : cfg_(cfg), command_(std::move(command)) {
    dir_ = fs::path(cfg.output_dir) / command_;
    fs::create_directories(dir_);
  }

  const fs::path& dir() const { return dir_; }

  void text(const std::string& name, const std::string& body) {
    write_text_file(dir_ / name, body);
    files_[name] = sha256_file(dir_ / name);
  }
  void json_file(const std::string& name, const json& j) {
    write_json_file(dir_ / name, j);
    files_[name] = sha256_file(dir_ / name);
  }
  // A file written by someone else into dir().
  void adopt(const std::string& name) { files_[name] = sha256_file(dir_ / name); }
  void input(const std::string& role, const fs::path& p) { inputs_[role] = {{"path", p.string()}, {"sha256", sha256_file(p)}}; }

  CommandResult finish(json summary) {
    json m;
    m["command"] = command_;
    m["config_sha256"] = config_hash(cfg_);
    m["config"] = config_to_json(cfg_);
    m["inputs"] = inputs_;
    json files = json::array();
    for (const auto& [name, sum] : files_) files.push_back({{"path", name}, {"sha256", sum}});
    m["files"] = files;
    m["summary"] = summary;
    write_json_file(dir_ / "manifest.json", m);
    return {dir_, summary};
  }

 private:
  const RunConfig& cfg_;
  std::string command_;
  fs::path dir_;
  std::map<std::string, std::string> files_;
  json inputs_ = json::object();
};

void require_artifact(const fs::path& p, const std::string& what) {
  if (!fs::exists(p)) fail(ErrorCode::kMissingArtifact, what + " not found: " + p.string());
}

struct Setup {
  std::unique_ptr<envs::Environment> env;
  target::TargetPtr target;
};

Setup setup(const RunConfig& cfg, Output* out) {
  Setup s;
  s.env = envs::make_env(cfg.env);
  if (cfg.target.kind == "scripted") {
    s.target = target::scripted_policy(cfg.env.name, cfg.env.n_agents, cfg.env.grid, cfg.target.weakened);
  } else {
    require_artifact(cfg.target.checkpoint, "target checkpoint");
    s.target = target::load_learned_target(cfg.target.checkpoint);
    if (out) out->input("target", cfg.target.checkpoint);
  }
  target::check_compatible(*s.target, *s.env);
  return s;
}

std::shared_ptr<const explain::Explainer> explainer_for(const RunConfig& cfg, const Setup& s, Output* out) {
  explain::ExplainerOptions opts;
  opts.kind = explain::explainer_kind_from_string(cfg.explainer.kind);
  opts.oracle_rollouts = cfg.explainer.oracle_rollouts;
  opts.workers = cfg.workers;
  opts.grad_norm = explain::grad_norm_from_string(cfg.explainer.grad_norm);
  if (opts.kind == explain::ExplainerKind::kEmai) {
    require_artifact(cfg.explainer.checkpoint, "masking checkpoint");
    auto masker = std::make_shared<masking::MaskingPolicy>(masking::MaskingPolicy::load(cfg.explainer.checkpoint));
    require(masker->params().target_checksum == masking::target_checksum(*s.target), ErrorCode::kIncompatible,
            "masking checkpoint was trained against a different target than '" + s.target->id() + "'");
    opts.masker = std::move(masker);
    if (out) out->input("masker", cfg.explainer.checkpoint);
  }
  return explain::make_explainer(opts, s.target);
}

eval::EvalConfig eval_config(const RunConfig& cfg) {
  eval::EvalConfig e;
  e.episodes = cfg.eval.episodes;
  e.seed = cfg.seed;
  e.workers = cfg.workers;
  e.record_episodes = cfg.eval.record_episodes;
  return e;
}

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

json delta_json(const eval::DeltaReport& r) {
  return {{"explainer", r.explainer_id}, {"env", r.env},
          {"episodes", r.episodes},      {"mean_original", r.mean_original},
          {"mean_modified", r.mean_modified}, {"mean_delta", r.mean_delta},
          {"se", r.se},                  {"modified_steps", r.modified_steps},
          {"deltas", r.deltas}};
}

std::string delta_csv(const eval::DeltaReport& r, const std::string& metric) {
  std::string s = "explainer,env,metric,value,stderr,episodes\n";
  s += r.explainer_id + "," + r.env + "," + metric + "," + csv_num(r.mean_delta) + "," + csv_num(r.se) + "," +
       std::to_string(r.episodes) + "\n";
  return s;
}

void write_replays(Output& out, const std::vector<replay::EpisodeRecord>& rs) {
  if (rs.empty()) return;
  out.text("replays.ndjson", replay::serialize_many(rs));
}

}  // namespace

CommandResult train_target_cmd(const RunConfig& cfg) {
  Output out(cfg, "train-target");
  auto env = envs::make_env(cfg.env);
  const auto trained = target::train_target(*env, target_train_config(cfg, target::TrainConfig{}));
  trained.save(out.dir() / "target.json");
  out.adopt("target.json");
  out.text("curve.csv", target::curve_to_csv(trained.curve));
  double tail = 0.0;
  const std::size_t n = std::min<std::size_t>(100, trained.curve.size());
  for (std::size_t i = trained.curve.size() - n; i < trained.curve.size(); ++i) tail += trained.curve[i].episode_return;
  return out.finish({{"env_steps", trained.env_steps},
                     {"episodes", trained.curve.size()},
                     {"final_mean_return", n ? tail / static_cast<double>(n) : 0.0}});
}

CommandResult train_emai_cmd(const RunConfig& cfg) {
  Output out(cfg, "train-emai");
  const Setup s = setup(cfg, &out);
  const auto trained = masking::train_emai(*s.target, *s.env, emai_config(cfg));
  trained.policy.save(out.dir() / "masker.json", trained.env_steps);
  out.adopt("masker.json");
  out.text("curve.csv", masking::curve_to_csv(trained.curve));
  out.json_file("baseline.json", {{"j_pi", trained.baseline.mean},
                                  {"se", trained.baseline.se},
                                  {"mean_abs_step_reward", trained.baseline.mean_abs_step_reward},
                                  {"episodes", trained.baseline.episodes},
                                  {"beta", trained.policy.params().beta}});
  double mask_rate = 0.0;
  const std::size_t n = std::min<std::size_t>(100, trained.curve.size());
  for (std::size_t i = trained.curve.size() - n; i < trained.curve.size(); ++i) mask_rate += trained.curve[i].mask_rate;
  return out.finish({{"env_steps", trained.env_steps},
                     {"j_pi", trained.baseline.mean},
                     {"beta", trained.policy.params().beta},
                     {"final_mask_rate", n ? mask_rate / static_cast<double>(n) : 0.0}});
}

CommandResult explain_cmd(const RunConfig& cfg, std::size_t episodes) {
  require(episodes >= 1, ErrorCode::kConfig, "explain needs at least one episode");
  Output out(cfg, "explain");
  const Setup s = setup(cfg, &out);
  const auto explainer = explainer_for(cfg, s, &out);
  std::vector<replay::EpisodeRecord> records;
  const eval::RecordInfo info{s.target->id(), explainer->id()};
  for (std::size_t k = 0; k < episodes; ++k) {
    Rng rng = make_rng(cfg.seed, Stream::kExplainer, k);
    const eval::DecideFn decide = [&](const envs::Environment& e, const envs::Observations& obs) {
      eval::StepDecision d;
      d.target_actions = target::joint_action(*s.target, obs);
      d.final_actions = d.target_actions;
      const auto state = e.state();
      d.importance = explainer->explain({obs, state, e.time(), &e, &rng});
      return d;
    };
    auto res = eval::run_episode(*s.env, derive_seed(cfg.seed, Stream::kEnvReset, k), decide, &info);
    records.push_back(std::move(*res.record));
  }
  out.text("replays.ndjson", replay::serialize_many(records));
  return out.finish({{"explainer", explainer->id()}, {"episodes", episodes}});
}

CommandResult eval_fidelity_cmd(const RunConfig& cfg) {
  Output out(cfg, "eval-fidelity");
  const Setup s = setup(cfg, &out);
  const auto explainer = explainer_for(cfg, s, &out);
  const auto r = eval::eval_fidelity(*explainer, *s.target, *s.env, eval_config(cfg));
  const json rrd = r.rrd ? json(*r.rrd) : json(nullptr);
  const json report = {{"explainer", r.explainer_id}, {"env", r.env},   {"episodes", r.episodes},
                       {"r_o", r.r_o},                {"r_e", r.r_e},   {"r_r", r.r_r},
                       {"se_o", r.se_o},              {"se_e", r.se_e}, {"se_r", r.se_r},
                       {"numerator", r.numerator},    {"denominator", r.denominator},
                       {"rrd", rrd},                  {"rrd_se", r.rrd_se}};
  out.json_file("rrd.json", report);
  std::string csv = "explainer,env,metric,value,stderr,episodes\n";
  auto row = [&](const std::string& metric, const std::string& v, double se) {
    csv += r.explainer_id + "," + r.env + "," + metric + "," + v + "," + csv_num(se) + "," + std::to_string(r.episodes) + "\n";
  };
  row("r_o", csv_num(r.r_o), r.se_o);
  row("r_e", csv_num(r.r_e), r.se_e);
  row("r_r", csv_num(r.r_r), r.se_r);
  row("rrd", r.rrd ? csv_num(*r.rrd) : "undefined", r.rrd_se);
  out.text("rrd.csv", csv);
  write_replays(out, r.replays);
  return out.finish({{"explainer", r.explainer_id}, {"rrd", rrd}, {"rrd_se", r.rrd_se}});
}

CommandResult attack_cmd(const RunConfig& cfg) {
  Output out(cfg, "attack");
  const Setup s = setup(cfg, &out);
  const auto explainer = explainer_for(cfg, s, &out);
  const auto r = eval::launch_attack(*explainer, *s.target, *s.env, cfg.eval.noise_eps, eval_config(cfg),
                                     cfg.eval.attack_all);
  json report = delta_json(r);
  report["noise_eps"] = cfg.eval.noise_eps;
  report["attack_all"] = cfg.eval.attack_all;
  out.json_file("attack.json", report);
  out.text("attack.csv", delta_csv(r, "attack_delta"));
  write_replays(out, r.replays);
  return out.finish({{"explainer", r.explainer_id}, {"mean_delta", r.mean_delta}, {"se", r.se}});
}

CommandResult patch_cmd(const RunConfig& cfg) {
  Output out(cfg, "patch");
  const Setup s = setup(cfg, &out);
  const auto explainer = explainer_for(cfg, s, &out);
  const auto ecfg = eval_config(cfg);
  const auto package = eval::build_patch_package(*explainer, *s.target, *s.env, cfg.eval.harvest_episodes,
                                                 cfg.eval.quantile, ecfg);
  if (package.degenerate) std::fprintf(stderr, "warning: all harvested episodes tie; kept every episode\n");
  out.json_file("package.json", eval::to_json(package));
  const double d_th = cfg.eval.d_th.value_or(0.05 * static_cast<double>(s.env->spec().obs_dim));
  const auto r = eval::apply_patch(package, *explainer, *s.target, *s.env, d_th, ecfg);
  json report = delta_json(r);
  report["d_th"] = d_th;
  report["package_entries"] = package.entries.size();
  out.json_file("patch.json", report);
  out.text("patch.csv", delta_csv(r, "patch_delta"));
  write_replays(out, r.replays);
  return out.finish({{"explainer", r.explainer_id},
                     {"mean_delta", r.mean_delta},
                     {"se", r.se},
                     {"package_entries", package.entries.size()}});
}

std::string render_cmd(const fs::path& replay_path, const std::string& mode) {
  const auto m = replay::render_mode_from_string(mode);
  require_artifact(replay_path, "replay file");
  std::string text;
  for (const auto& r : replay::read_replays(replay_path)) text += replay::render(r, m);
  return text;
}

}  // namespace emai::app
