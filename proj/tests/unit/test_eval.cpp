#include <doctest.h>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "common/stats.hpp"
#include "envs/diagnostic.hpp"
#include "envs/factory.hpp"
#include "envs/key_corridor.hpp"
#include "eval/harness.hpp"
#include "explain/blackbox.hpp"
#include "target/scripted.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

using namespace emai;
using namespace emai::eval;

namespace {

// Always names one fixed agent.
class FixedExplainer final : public explain::Explainer {
 public:
  explicit FixedExplainer(std::size_t agent) : agent_(agent) {}
  explain::ExplainerKind kind() const override { return explain::ExplainerKind::kRandom; }
  explain::Access access() const override { return explain::Access::kBlackBox; }
  std::string id() const override { return "fixed:" + std::to_string(agent_); }
  std::vector<double> explain(const explain::ExplainContext& ctx) const override {
    std::vector<double> s(ctx.observations.size(), 0.0);
    s[agent_] = 1.0;
    return s;
  }

 private:
  std::size_t agent_;
};

double episode_reward(const target::TargetPolicy& target, const envs::Environment& proto, std::uint64_t seed) {
  auto env = proto.clone();
  auto obs = env->reset(seed).observations;
  double sum = 0.0;
  while (!env->done()) {
    const auto r = env->step(target::joint_action(target, obs));
    sum += r.reward;
    obs = r.observations;
  }
  return sum;
}

}  // namespace

TEST_CASE("rrd formula") {
  const std::vector<double> ro(5, 10.0), re(5, 4.0), rr(5, 8.0);
  const auto r = rrd_from_rewards(ro, re, rr);
  REQUIRE(r.rrd.has_value());
  CHECK(*r.rrd == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.numerator == doctest::Approx(6.0));
  CHECK(r.denominator == doctest::Approx(2.0));
  CHECK(r.rrd_se == 0.0);
}

TEST_CASE("rrd denominator guard leaves rrd undefined") {
  const std::vector<double> ro{1.0, 2.0, 3.0}, re{0.0, 0.0, 0.0}, rr{1.0, 2.0, 3.0};
  const auto r = rrd_from_rewards(ro, re, rr);
  CHECK_FALSE(r.rrd.has_value());
  CHECK(r.numerator == doctest::Approx(2.0));
  CHECK(r.denominator == 0.0);
}

TEST_CASE("random explainer rrd is near 1") {
  envs::KeyCorridor env;
  const auto target = target::scripted_policy("key_corridor");
  explain::RandomExplainer rnd;
  EvalConfig cfg;
  cfg.episodes = 500;
  cfg.seed = 3;
  const auto r = eval_fidelity(rnd, *target, env, cfg);
  REQUIRE(r.rrd.has_value());
  CHECK(r.episodes == 500);
  CHECK(std::fabs(*r.rrd - 1.0) <= 2.0 * r.rrd_se);
}

TEST_CASE("fidelity reports are reproducible and worker-invariant") {
  envs::KeyCorridor env;
  const auto target = target::scripted_policy("key_corridor");
  explain::RandomExplainer rnd;
  EvalConfig cfg;
  cfg.episodes = 60;
  const auto a = eval_fidelity(rnd, *target, env, cfg);
  cfg.workers = 3;
  const auto b = eval_fidelity(rnd, *target, env, cfg);
  CHECK(a.r_o == b.r_o);
  CHECK(a.r_e == b.r_e);
  CHECK(a.r_r == b.r_r);
  CHECK(a.rrd == b.rrd);
}

TEST_CASE("oracle-guided fidelity beats random on KeyCorridor") {
  envs::KeyCorridor env;
  const auto target = target::scripted_policy("key_corridor");
  explain::McOracleExplainer oracle(target, 16);
  EvalConfig cfg;
  cfg.episodes = 60;
  cfg.seed = 1;
  const auto r = eval_fidelity(oracle, *target, env, cfg);
  REQUIRE(r.rrd.has_value());
  CHECK(*r.rrd > 1.0 + 2.0 * r.rrd_se);
}

TEST_CASE("zero-noise attack leaves every episode unchanged") {
  envs::KeyCorridor env;
  const auto target = target::scripted_policy("key_corridor");
  explain::RandomExplainer rnd;
  EvalConfig cfg;
  cfg.episodes = 100;
  for (bool all : {false, true}) {
    const auto r = launch_attack(rnd, *target, env, 0.0, cfg, all);
    CHECK(r.mean_delta == 0.0);
    for (double d : r.deltas) CHECK(d == 0.0);
  }
  CHECK_THROWS_AS(launch_attack(rnd, *target, env, -0.1, cfg), Error);
}

TEST_CASE("saturating noise on every agent does not help") {
  envs::KeyCorridor env;
  const auto target = target::scripted_policy("key_corridor");
  explain::RandomExplainer rnd;
  EvalConfig cfg;
  cfg.episodes = 500;
  const auto r = launch_attack(rnd, *target, env, 2.0, cfg, true);
  CHECK(r.mean_delta <= 2.0 * r.se);
  CHECK(r.mean_delta < 0.0);
}

TEST_CASE("kept episode counts") {
  CHECK(kept_count(100, 0.1) == 10);
  CHECK(kept_count(100, 1.0) == 100);
  CHECK(kept_count(15, 0.1) == 2);
  CHECK(kept_count(10, 0.01) == 1);
}

TEST_CASE("harvest keeps exactly the best episodes") {
  envs::KeyCorridor env;
  const auto target = target::scripted_policy("key_corridor", 3, 8, true);
  FixedExplainer fixed(0);
  EvalConfig cfg;
  cfg.seed = 5;
  const auto p = build_patch_package(fixed, *target, env, 100, 0.1, cfg);
  REQUIRE(p.kept_episodes.size() == 10);
  CHECK_FALSE(p.degenerate);

  std::vector<double> rewards(100);
  for (std::size_t k = 0; k < 100; ++k)
    rewards[k] = episode_reward(*target, env, derive_seed(cfg.seed, Stream::kHarvest, k));
  std::vector<double> sorted = rewards;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double cutoff = sorted[9];
  for (std::size_t k : p.kept_episodes) CHECK(rewards[k] >= cutoff);
  for (const auto& e : p.entries) {
    CHECK(std::find(p.kept_episodes.begin(), p.kept_episodes.end(), e.episode) != p.kept_episodes.end());
    CHECK(e.agent == 0);
    CHECK(e.obs.size() == p.obs_dim);
  }

  const auto all = build_patch_package(fixed, *target, env, 20, 1.0, cfg);
  CHECK(all.kept_episodes.size() == 20);
  CHECK_THROWS_AS(build_patch_package(fixed, *target, env, 9, 0.1, cfg), Error);
}

TEST_CASE("package entries are unique observations") {
  envs::KeyCorridor env;
  const auto target = target::scripted_policy("key_corridor");
  explain::RandomExplainer rnd;
  EvalConfig cfg;
  const auto p = build_patch_package(rnd, *target, env, 30, 1.0, cfg);
  std::set<std::vector<double>> seen;
  for (const auto& e : p.entries) CHECK(seen.insert(e.obs).second);
  // Entries appear in harvest order, so the first copy of each observation is kept.
  for (std::size_t i = 1; i < p.entries.size(); ++i) {
    const auto& a = p.entries[i - 1];
    const auto& b = p.entries[i];
    CHECK((a.episode < b.episode || (a.episode == b.episode && a.t < b.t)));
  }
}

TEST_CASE("degenerate harvest keeps every episode") {
  envs::EnvConfig ec;
  ec.diagnostic = "zero_reward";
  const auto env = envs::make_env(ec);
  const auto target = target::scripted_policy("key_corridor");
  explain::RandomExplainer rnd;
  const auto p = build_patch_package(rnd, *target, *env, 10, 0.1, EvalConfig{});
  CHECK(p.degenerate);
  CHECK(p.kept_episodes.size() == 10);
}

TEST_CASE("oracle package is dominated by agent 0 before the switch") {
  envs::KeyCorridor env;
  const auto target = target::scripted_policy("key_corridor");
  explain::McOracleExplainer oracle(target, 16);
  EvalConfig cfg;
  const auto p = build_patch_package(oracle, *target, env, 10, 1.0, cfg);
  std::size_t pre = 0, agent0 = 0;
  for (const auto& e : p.entries) {
    if (e.obs[2] > 0.0) continue;
    ++pre;
    if (e.agent == 0) ++agent0;
  }
  REQUIRE(pre > 0);
  CHECK(static_cast<double>(agent0) / pre > 0.5);
}

TEST_CASE("nearest entry and threshold") {
  PatchPackage p;
  p.obs_dim = 2;
  p.entries = {{{0.0, 0.0}, 1}, {{1.0, 1.0}, 2}, {{0.5, 0.5}, 3}, {{-0.5, -0.5}, 4}};
  const std::vector<double> q{0.0, 0.0};
  CHECK(nearest_entry(p, q) == std::pair<std::size_t, double>{0, 0.0});
  const std::vector<double> mid{0.25, 0.25};
  // Entries 0 and 2 are both 0.5 away.
  CHECK(nearest_entry(p, mid).first == 0);
  CHECK(nearest_entry(p, mid).second == doctest::Approx(0.5));
  CHECK(within_threshold(0.0, 0.0));
  CHECK_FALSE(within_threshold(1e-12, 0.0));
  CHECK(within_threshold(0.09, 0.1));
  CHECK_FALSE(within_threshold(0.1, 0.1));
}

TEST_CASE("self-patching with exact matches is a no-op") {
  envs::KeyCorridor env;
  const auto target = target::scripted_policy("key_corridor");
  FixedExplainer fixed(0);
  EvalConfig cfg;
  cfg.episodes = 100;
  const auto p = build_patch_package(fixed, *target, env, 50, 1.0, cfg);
  const auto r = apply_patch(p, fixed, *target, env, 0.0, cfg);
  CHECK(r.mean_delta == 0.0);
  CHECK(r.modified_steps == 0);
  for (double d : r.deltas) CHECK(d == 0.0);

  PatchPackage empty = p;
  empty.entries.clear();
  CHECK_THROWS_AS(apply_patch(empty, fixed, *target, env, 0.1, cfg), Error);
}

TEST_CASE("strong-target package patches the weakened target") {
  envs::KeyCorridor env;
  const auto strong = target::scripted_policy("key_corridor");
  const auto weak = target::scripted_policy("key_corridor", 3, 8, true);
  FixedExplainer fixed(0);
  EvalConfig cfg;
  cfg.episodes = 200;
  const auto p = build_patch_package(fixed, *strong, env, 50, 1.0, cfg);
  const auto r = apply_patch(p, fixed, *weak, env, 0.05 * env.spec().obs_dim, cfg);
  CHECK(r.mean_delta > 2.0 * r.se);
}

TEST_CASE("patch package json round trip") {
  PatchPackage p;
  p.explainer_id = "random";
  p.env = "key_corridor";
  p.quantile = 0.25;
  p.obs_dim = 2;
  p.harvest_episodes = 12;
  p.kept_episodes = {3, 7, 1};
  p.entries = {{{0.125, -1.0}, 2, 1, 4, 3}, {{0.1, 0.3}, 0, 2, 5, 7}};
  const auto q = patch_package_from_json(to_json(p));
  CHECK(q.explainer_id == p.explainer_id);
  CHECK(q.env == p.env);
  CHECK(q.quantile == p.quantile);
  CHECK(q.kept_episodes == p.kept_episodes);
  REQUIRE(q.entries.size() == 2);
  CHECK(q.entries[1].obs == p.entries[1].obs);
  CHECK(q.entries[1].agent == 2);
  auto bad = to_json(p);
  bad["version"] = 2;
  CHECK_THROWS_AS(patch_package_from_json(bad), Error);
}
