#include "eval/harness.hpp"

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "common/rng.hpp"
#include "common/stats.hpp"
#include "eval/rollout.hpp"
#include "masking/mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace emai::eval {

namespace {

std::uint64_t episode_seed(const EvalConfig& cfg, std::size_t k) {
  return derive_seed(cfg.seed, Stream::kEnvReset, static_cast<std::uint64_t>(k));
}

StepDecision unmodified(const target::TargetPolicy& target, const envs::Observations& obs) {
  StepDecision d;
  d.target_actions = target::joint_action(target, obs);
  d.final_actions = d.target_actions;
  return d;
}

std::vector<double> original_rewards(const target::TargetPolicy& target, const envs::Environment& env,
                                     const EvalConfig& cfg) {
  std::vector<double> out(cfg.episodes);
  parallel_for(cfg.episodes, cfg.workers, [&](std::size_t k) {
    out[k] = run_episode(env, episode_seed(cfg, k), [&](const envs::Environment&, const envs::Observations& obs) {
               return unmodified(target, obs);
             }).reward_sum;
  });
  return out;
}

std::vector<double> explain_step(const explain::Explainer& explainer, const envs::Environment& env,
                                 const envs::Observations& obs, Rng& rng) {
  const std::vector<double> state = env.state();
  const explain::ExplainContext ctx{obs, state, env.time(), &env, &rng};
  auto scores = explainer.explain(ctx);
  require(scores.size() == obs.size(), ErrorCode::kInvalidArgument,
          "explainer '" + explainer.id() + "' returned " + std::to_string(scores.size()) + " scores for " +
              std::to_string(obs.size()) + " agents");
  for (double s : scores) require(std::isfinite(s), ErrorCode::kNumeric, "explainer returned a non-finite score");
  return scores;
}

// Runs `count` modified episodes in parallel, recording the first few.
template <typename MakeDecide>
std::vector<EpisodeResult> run_batch(const envs::Environment& env, const EvalConfig& cfg, const RecordInfo& info,
                                     MakeDecide&& make_decide) {
  std::vector<EpisodeResult> out(cfg.episodes);
  parallel_for(cfg.episodes, cfg.workers, [&](std::size_t k) {
    auto decide = make_decide(k);
    out[k] = run_episode(env, episode_seed(cfg, k), decide, k < cfg.record_episodes ? &info : nullptr);
  });
  return out;
}

DeltaReport delta_report(const explain::Explainer& explainer, const envs::Environment& env,
                         const std::vector<double>& original, std::vector<EpisodeResult>& modified) {
  DeltaReport r;
  r.explainer_id = explainer.id();
  r.env = env.name();
  r.episodes = original.size();
  std::vector<double> mod;
  for (std::size_t k = 0; k < original.size(); ++k) {
    mod.push_back(modified[k].reward_sum);
    r.deltas.push_back(modified[k].reward_sum - original[k]);
    if (modified[k].record) r.replays.push_back(std::move(*modified[k].record));
  }
  r.mean_original = mean_stderr(original).mean;
  r.mean_modified = mean_stderr(mod).mean;
  const auto d = mean_stderr(r.deltas);
  r.mean_delta = d.mean;
  r.se = d.se;
  return r;
}

}  // namespace

RrdReport rrd_from_rewards(std::span<const double> r_o, std::span<const double> r_e, std::span<const double> r_r) {
  require(!r_o.empty() && r_o.size() == r_e.size() && r_o.size() == r_r.size(), ErrorCode::kInvalidArgument,
          "rrd: reward batches must be non-empty and matched");
  RrdReport r;
  r.episodes = r_o.size();
  const auto o = mean_stderr(r_o), e = mean_stderr(r_e), rr = mean_stderr(r_r);
  r.r_o = o.mean;
  r.r_e = e.mean;
  r.r_r = rr.mean;
  r.se_o = o.se;
  r.se_e = e.se;
  r.se_r = rr.se;
  std::vector<double> da(r.episodes), db(r.episodes);
  for (std::size_t k = 0; k < r.episodes; ++k) {
    da[k] = r_e[k] - r_o[k];
    db[k] = r_r[k] - r_o[k];
  }
  const auto a = mean_stderr(da), b = mean_stderr(db);
  r.numerator = std::fabs(a.mean);
  r.denominator = std::fabs(b.mean);
  if (r.denominator >= kRrdGuard) {
    r.rrd = r.numerator / r.denominator;
    // f = |A| / |B|: df/dA = sgn(A)/|B|, df/dB = -|A| sgn(B) / B^2.
    const double ga = (a.mean >= 0.0 ? 1.0 : -1.0) / r.denominator;
    const double gb = -r.numerator * (b.mean >= 0.0 ? 1.0 : -1.0) / (r.denominator * r.denominator);
    const double var = ga * ga * a.se * a.se + gb * gb * b.se * b.se + 2.0 * ga * gb * covariance_of_means(da, db);
    r.rrd_se = std::sqrt(std::max(0.0, var));
  }
  return r;
}

RrdReport eval_fidelity(const explain::Explainer& explainer, const target::TargetPolicy& target,
                        const envs::Environment& env, const EvalConfig& cfg) {
  target::check_compatible(target, env);
  require(cfg.episodes >= 1, ErrorCode::kInvalidArgument, "eval.episodes must be >= 1");
  const auto& space = env.spec().action_space;
  const std::vector<double> original = original_rewards(target, env, cfg);
  const RecordInfo info{target.id(), explainer.id()};

  auto guided = run_batch(env, cfg, info, [&](std::size_t k) {
    auto expl_rng = std::make_shared<Rng>(make_rng(cfg.seed, Stream::kExplainer, k));
    auto mask_rng = std::make_shared<Rng>(make_rng(cfg.seed, Stream::kMasking, k));
    return [&, expl_rng, mask_rng](const envs::Environment& e, const envs::Observations& obs) {
      StepDecision d = unmodified(target, obs);
      d.importance = explain_step(explainer, e, obs, *expl_rng);
      const auto mask = masking::MaskAction::single(obs.size(), explain::most_critical(d.importance));
      d.mask = std::vector<int>(mask.bits().begin(), mask.bits().end());
      d.final_actions = masking::compose_actions(d.target_actions, mask, space, *mask_rng);
      return d;
    };
  });
  auto random = run_batch(env, EvalConfig{cfg.episodes, cfg.seed, cfg.workers, 0}, info, [&](std::size_t k) {
    auto sel_rng = std::make_shared<Rng>(make_rng(cfg.seed, Stream::kRandomSelection, k));
    auto mask_rng = std::make_shared<Rng>(make_rng(cfg.seed, Stream::kMasking, k));
    return [&, sel_rng, mask_rng](const envs::Environment&, const envs::Observations& obs) {
      StepDecision d = unmodified(target, obs);
      const auto mask = masking::MaskAction::single(obs.size(), uniform_index(*sel_rng, obs.size()));
      d.final_actions = masking::compose_actions(d.target_actions, mask, space, *mask_rng);
      return d;
    };
  });

  std::vector<double> r_e, r_r;
  for (auto& g : guided) r_e.push_back(g.reward_sum);
  for (auto& g : random) r_r.push_back(g.reward_sum);
  RrdReport rep = rrd_from_rewards(original, r_e, r_r);
  rep.explainer_id = explainer.id();
  rep.env = env.name();
  for (auto& g : guided) {
    if (g.record) rep.replays.push_back(std::move(*g.record));
  }
  return rep;
}

DeltaReport launch_attack(const explain::Explainer& explainer, const target::TargetPolicy& target,
                          const envs::Environment& env, double noise_eps, const EvalConfig& cfg, bool attack_all) {
  target::check_compatible(target, env);
  require(noise_eps >= 0.0 && std::isfinite(noise_eps), ErrorCode::kInvalidArgument, "noise_eps must be >= 0");
  const std::vector<double> original = original_rewards(target, env, cfg);
  const RecordInfo info{target.id(), explainer.id()};
  std::vector<std::size_t> attacked(cfg.episodes, 0);
  auto modified = run_batch(env, cfg, info, [&](std::size_t k) {
    auto expl_rng = std::make_shared<Rng>(make_rng(cfg.seed, Stream::kExplainer, k));
    auto noise_rng = std::make_shared<Rng>(make_rng(cfg.seed, Stream::kAttackNoise, k));
    return [&, k, expl_rng, noise_rng](const envs::Environment& e, const envs::Observations& obs) {
      StepDecision d;
      d.importance = explain_step(explainer, e, obs, *expl_rng);
      const std::size_t c = explain::most_critical(d.importance);
      envs::Observations seen = obs;
      for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!attack_all && i != c) continue;
        ++attacked[k];
        if (noise_eps == 0.0) continue;
        std::uniform_real_distribution<double> noise(-noise_eps, noise_eps);
        for (double& x : seen[i]) x = std::clamp(x + noise(*noise_rng), -1.0, 1.0);
      }
      d.target_actions = target::joint_action(target, seen);
      d.final_actions = d.target_actions;
      return d;
    };
  });
  DeltaReport r = delta_report(explainer, env, original, modified);
  r.modified_steps = std::accumulate(attacked.begin(), attacked.end(), std::size_t{0});
  return r;
}

std::size_t kept_count(std::size_t episodes, double quantile) {
  const auto k = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(episodes) - 1e-9));
  return std::clamp<std::size_t>(k, 1, episodes);
}

PatchPackage build_patch_package(const explain::Explainer& explainer, const target::TargetPolicy& target,
                                 const envs::Environment& env, std::size_t harvest_episodes, double quantile,
                                 const EvalConfig& cfg) {
  target::check_compatible(target, env);
  require(harvest_episodes >= 10, ErrorCode::kInvalidArgument, "patch harvest needs at least 10 episodes");
  require(quantile > 0.0 && quantile <= 1.0, ErrorCode::kInvalidArgument, "eval.quantile must lie in (0, 1]");
  const auto harvest_seed = [&](std::size_t k) {
    return derive_seed(cfg.seed, Stream::kHarvest, static_cast<std::uint64_t>(k));
  };
  std::vector<double> rewards(harvest_episodes);
  parallel_for(harvest_episodes, cfg.workers, [&](std::size_t k) {
    rewards[k] = run_episode(env, harvest_seed(k), [&](const envs::Environment&, const envs::Observations& obs) {
                   return unmodified(target, obs);
                 }).reward_sum;
  });

  PatchPackage p;
  p.explainer_id = explainer.id();
  p.env = env.name();
  p.quantile = quantile;
  p.obs_dim = env.spec().obs_dim;
  p.harvest_episodes = harvest_episodes;
  std::vector<std::size_t> order(harvest_episodes);
  std::iota(order.begin(), order.end(), 0);
  const auto [lo, hi] = std::minmax_element(rewards.begin(), rewards.end());
  if (*lo == *hi) {
    p.degenerate = true;
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rewards[a] > rewards[b]; });
    order.resize(kept_count(harvest_episodes, quantile));
    std::sort(order.begin(), order.end());
  }
  p.kept_episodes = order;

  // Re-run the kept episodes with the explainer to find each step's critical agent.
  std::vector<std::vector<PatchEntry>> per_episode(order.size());
  parallel_for(order.size(), cfg.workers, [&](std::size_t j) {
    const std::size_t k = order[j];
    Rng rng = make_rng(cfg.seed, Stream::kExplainer, k);
    run_episode(env, harvest_seed(k), [&](const envs::Environment& e, const envs::Observations& obs) {
      StepDecision d = unmodified(target, obs);
      const std::size_t c = explain::most_critical(explain_step(explainer, e, obs, rng));
      per_episode[j].push_back({obs[c], d.target_actions[c], c, e.time(), k});
      return d;
    });
  });
  for (auto& entries : per_episode) {
    for (auto& entry : entries) {
      const bool seen = std::any_of(p.entries.begin(), p.entries.end(),
                                    [&](const PatchEntry& x) { return x.obs == entry.obs; });
      if (!seen) p.entries.push_back(std::move(entry));
    }
  }
  return p;
}

std::pair<std::size_t, double> nearest_entry(const PatchPackage& package, std::span<const double> obs) {
  require(!package.entries.empty(), ErrorCode::kInvalidArgument, "patch package is empty");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < package.entries.size(); ++j) {
    const auto& e = package.entries[j].obs;
    require(e.size() == obs.size(), ErrorCode::kIncompatible, "patch entry length does not match the observation");
    double d = 0.0;
    for (std::size_t c = 0; c < obs.size(); ++c) d += std::fabs(e[c] - obs[c]);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return {best, best_d};
}

bool within_threshold(double distance, double d_th) { return distance < d_th || distance == 0.0; }

DeltaReport apply_patch(const PatchPackage& package, const explain::Explainer& explainer,
                        const target::TargetPolicy& target, const envs::Environment& env, double d_th,
                        const EvalConfig& cfg) {
  target::check_compatible(target, env);
  require(!package.entries.empty(), ErrorCode::kInvalidArgument, "patch package is empty");
  require(package.obs_dim == env.spec().obs_dim, ErrorCode::kIncompatible,
          "patch package observation length does not match the environment");
  require(d_th >= 0.0, ErrorCode::kInvalidArgument, "eval.d_th must be >= 0");
  const std::vector<double> original = original_rewards(target, env, cfg);
  const RecordInfo info{target.id(), explainer.id()};
  std::vector<std::size_t> replaced(cfg.episodes, 0);
  auto modified = run_batch(env, cfg, info, [&](std::size_t k) {
    auto expl_rng = std::make_shared<Rng>(make_rng(cfg.seed, Stream::kExplainer, k));
    return [&, k, expl_rng](const envs::Environment& e, const envs::Observations& obs) {
      StepDecision d = unmodified(target, obs);
      d.importance = explain_step(explainer, e, obs, *expl_rng);
      const std::size_t c = explain::most_critical(d.importance);
      const auto [j, dist] = nearest_entry(package, obs[c]);
      if (within_threshold(dist, d_th) && package.entries[j].action != d.target_actions[c]) {
        d.final_actions[c] = package.entries[j].action;
        ++replaced[k];
      }
      return d;
    };
  });
  DeltaReport r = delta_report(explainer, env, original, modified);
  r.modified_steps = std::accumulate(replaced.begin(), replaced.end(), std::size_t{0});
  return r;
}

nlohmann::json to_json(const PatchPackage& p) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : p.entries) {
    entries.push_back({{"obs", e.obs}, {"action", e.action}, {"agent", e.agent}, {"t", e.t}, {"episode", e.episode}});
  }
  return {{"format", "emai-patch-package"},
          {"version", 1},
          {"explainer_id", p.explainer_id},
          {"env", p.env},
          {"quantile", p.quantile},
          {"obs_dim", p.obs_dim},
          {"harvest_episodes", p.harvest_episodes},
          {"kept_episodes", p.kept_episodes},
          {"degenerate", p.degenerate},
          {"entries", entries}};
}

PatchPackage patch_package_from_json(const nlohmann::json& j) {
  try {
    require(j.at("format").get<std::string>() == "emai-patch-package" && j.at("version").get<int>() == 1,
            ErrorCode::kParse, "not a version-1 patch package");
    PatchPackage p;
    p.explainer_id = j.at("explainer_id").get<std::string>();
    p.env = j.at("env").get<std::string>();
    p.quantile = j.at("quantile").get<double>();
    p.obs_dim = j.at("obs_dim").get<std::size_t>();
    p.harvest_episodes = j.at("harvest_episodes").get<std::size_t>();
    p.kept_episodes = j.at("kept_episodes").get<std::vector<std::size_t>>();
    p.degenerate = j.at("degenerate").get<bool>();
    for (const auto& e : j.at("entries")) {
      PatchEntry x{e.at("obs").get<std::vector<double>>(), e.at("action").get<int>(), e.at("agent").get<std::size_t>(),
                   e.at("t").get<int>(), e.at("episode").get<std::size_t>()};
      require(x.obs.size() == p.obs_dim, ErrorCode::kParse, "patch entry has the wrong observation length");
      p.entries.push_back(std::move(x));
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("patch package: ") + e.what());
  }
}

}  // namespace emai::eval
