#include <doctest.h>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "ctde/learner.hpp"
#include "envs/factory.hpp"
#include "envs/key_corridor.hpp"
#include "helpers.hpp"
#include "masking/baseline.hpp"
#include "masking/diff_loss.hpp"
#include "masking/importance.hpp"
#include "masking/mask.hpp"
#include "masking/masking_policy.hpp"
#include "masking/trainer.hpp"
#include "nn/grad_check.hpp"
#include "target/scripted.hpp"

#include <cmath>
#include <filesystem>

using namespace emai;
using namespace emai::masking;

namespace {

ctde::Episode toy_episode(Rng& rng, std::size_t steps, std::size_t n, std::size_t d, std::size_t sd, double beta) {
  ctde::EpisodeBuilder b(n, d, sd);
  auto obs = [&] {
    std::vector<std::vector<double>> o(n, std::vector<double>(d));
    for (auto& v : o) {
      for (auto& x : v) x = 2.0 * uniform01(rng) - 1.0;
    }
    return o;
  };
  auto state = [&] {
    std::vector<double> s(sd);
    for (auto& x : s) x = 2.0 * uniform01(rng) - 1.0;
    return s;
  };
  b.begin(obs(), state());
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<int> m(n);
    for (auto& x : m) x = static_cast<int>(uniform_index(rng, 2));
    const double rm = masking_reward(MaskAction(m), beta);
    b.add(m, 0.1 * (2.0 * uniform01(rng) - 1.0) + rm, rm, obs(), state(), t + 1 == steps);
  }
  return b.finish();
}

}  // namespace

TEST_CASE("apply_mask keep and mask branches") {
  envs::ActionSpace space(envs::Discrete{5});
  Rng rng(1);
  CHECK(apply_mask(2, kKeep, space, rng) == 2);
  std::vector<std::size_t> counts(5, 0);
  for (int i = 0; i < 10000; ++i) {
    const int a = apply_mask(2, kMask, space, rng);
    REQUIRE((a >= 0 && a < 5));
    ++counts[static_cast<std::size_t>(a)];
  }
  CHECK(testing::chi_square_stat(counts) < testing::chi_square_crit_01(4));

  envs::ActionSpace cont(envs::Continuous{{-1.0}, {1.0}});
  for (int i = 0; i < 100; ++i) {
    const auto a = std::get<std::vector<double>>(apply_mask(envs::Action{std::vector<double>{0.3}}, kMask, cont, rng));
    CHECK((a[0] >= -1.0 && a[0] <= 1.0));
  }
  CHECK(std::get<std::vector<double>>(apply_mask(envs::Action{std::vector<double>{0.3}}, kKeep, cont, rng))[0] == 0.3);
  CHECK_THROWS_AS(apply_mask(7, kKeep, space, rng), Error);
  CHECK_THROWS_AS(MaskAction(std::vector<int>{0, 2}), Error);
}

TEST_CASE("masking reward") {
  CHECK(masking_reward(MaskAction({1, 0, 1, 0}), 0.1) == doctest::Approx(0.2));
  CHECK(masking_reward(MaskAction({1, 1, 0}), 0.0) == 0.0);
  CHECK(masking_reward(MaskAction::all(8), 0.05) == doctest::Approx(0.4));
}

TEST_CASE("importance from a Q pair") {
  const auto s = importance_from_q(2.0, 0.5);
  CHECK(s.gap == doctest::Approx(1.5));
  CHECK(s.mask_prob == doctest::Approx(1.0 / (1.0 + std::exp(1.5))));
  CHECK(s.mask_prob == doctest::Approx(0.1824).epsilon(1e-3));
  const auto z = importance_from_q(0.7, 0.7);
  CHECK(z.gap == 0.0);
  CHECK(z.mask_prob == 0.5);
  const auto far = importance_from_q(-800.0, 800.0);
  CHECK((far.mask_prob > 0.0 && far.mask_prob <= 1.0));
}

TEST_CASE("gap ranking equals (1 - mask_prob) ranking, and survives shared affine maps") {
  Rng rng(2);
  for (int draw = 0; draw < 500; ++draw) {
    std::vector<ImportanceScore> s, t;
    const double a = 0.1 + 3.0 * uniform01(rng), b = 5.0 * (2.0 * uniform01(rng) - 1.0);
    for (int i = 0; i < 4; ++i) {
      const double qk = 4.0 * (2.0 * uniform01(rng) - 1.0), qm = 4.0 * (2.0 * uniform01(rng) - 1.0);
      s.push_back(importance_from_q(qk, qm));
      t.push_back(importance_from_q(a * qk + b, a * qm + b));
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        CHECK((s[i].gap > s[j].gap) == (1.0 - s[i].mask_prob > 1.0 - s[j].mask_prob));
        CHECK((s[i].gap > s[j].gap) == (t[i].gap > t[j].gap));
      }
    }
    CHECK(most_critical(s) == most_critical(t));
  }
  const std::vector<ImportanceScore> tie{{0.5, 0.3}, {0.5, 0.3}, {0.1, 0.4}};
  CHECK(most_critical(tie) == 0);
}

TEST_CASE("diff loss literal example") {
  ctde::Episode ep;
  ep.n_agents = 1;
  ep.steps = 1;
  ep.rewards = {0.2};
  ep.bonus = {0.2};
  ep.terminal = {1};
  ctde::BatchValues v;
  v.q_tot = nn::Tensor(1, 1, {9.2});
  v.offsets = {0, 1};
  const ctde::Episode* batch[] = {&ep};
  CHECK(diff_loss(v, batch, 10.0, 0.99).item() == doctest::Approx(1.0));

  // Q_tot equal to the discounted decomposition with no masking reward.
  ctde::Episode ep2;
  ep2.steps = 3;
  ep2.rewards = {0.0, 0.0, 0.0};
  ep2.bonus = {0.0, 0.0, 0.0};
  ctde::BatchValues v2;
  v2.q_tot = nn::Tensor(3, 1, {1.0, 2.0, 4.0});
  v2.offsets = {0, 3};
  const double j = 1.0 + 0.5 * 2.0 + 0.25 * 4.0;
  const ctde::Episode* batch2[] = {&ep2};
  CHECK(diff_loss(v2, batch2, j, 0.5).item() == doctest::Approx(0.0));
}

TEST_CASE("diff loss realized and initial modes") {
  ctde::Episode ep;
  ep.steps = 2;
  ep.rewards = {1.3, 0.1};
  ep.bonus = {0.3, 0.1};
  ctde::BatchValues v;
  v.q_tot = nn::Tensor(2, 1, {5.0, 7.0}, true);
  v.offsets = {0, 2};
  const ctde::Episode* batch[] = {&ep};
  // realized: D = J - (1.0 + 0.5 * 0.0)
  CHECK(diff_loss(v, batch, 3.0, 0.5, DiffMode::kRealized).item() == doctest::Approx(4.0));
  // initial: D = J - (Q_0 - (0.3 + 0.5 * 0.1))
  CHECK(diff_loss(v, batch, 3.0, 0.5, DiffMode::kInitial).item() == doctest::Approx(std::pow(3.0 - 5.0 + 0.35, 2)));
  CHECK_THROWS_AS(diff_mode_from_string("bogus"), Error);
}

TEST_CASE("gradients of L_d and the total loss match finite differences") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    ctde::AgentQNet net(3, 2, 2, 8, rng);
    ctde::Mixer mixer(ctde::MixerKind::kMonotonic, 2, 4, 4, 8, rng);
    ctde::QLearner learner(net, mixer, ctde::LearnerConfig{});
    const ctde::Episode e1 = toy_episode(rng, 3, 2, 3, 4, 0.05);
    const ctde::Episode e2 = toy_episode(rng, 2, 2, 3, 4, 0.05);
    const ctde::Episode* batch[] = {&e1, &e2};
    auto params = learner.parameters();
    auto ld = [&] { return diff_loss(learner.evaluate(batch), batch, 0.4, 0.9); };
    CHECK(nn::grad_check(ld, params, 1e-4) < 1e-4);
    auto total = [&] {
      const auto values = learner.evaluate(batch);
      return learner.td_loss(values) + nn::scale(diff_loss(values, batch, 0.4, 0.9), 0.7);
    };
    CHECK(nn::grad_check(total, params, 1e-4) < 1e-4);
  }
}

TEST_CASE("total loss decomposes as L_e + lambda L_d") {
  Rng rng(9);
  ctde::AgentQNet net(3, 2, 2, 8, rng);
  ctde::Mixer mixer(ctde::MixerKind::kMonotonic, 2, 4, 4, 8, rng);
  ctde::QLearner learner(net, mixer, ctde::LearnerConfig{});
  const ctde::Episode e1 = toy_episode(rng, 4, 2, 3, 4, 0.02);
  const ctde::Episode* batch[] = {&e1};
  const double lambda = 0.35;
  const auto values = learner.evaluate(batch);
  const double le = learner.td_loss(values).item();
  const double l_d = diff_loss(values, batch, 0.8, 0.99).item();
  const auto stats = learner.train_step(batch, [&](const ctde::BatchValues& v, auto b) {
    return nn::scale(diff_loss(v, b, 0.8, 0.99), lambda);
  });
  CHECK(std::fabs(stats.td - le) <= 1e-12);
  CHECK(std::fabs(stats.total - (le + lambda * l_d)) <= 1e-12);
}

TEST_CASE("baseline return") {
  auto env = envs::make_env(envs::EnvConfig{});
  const auto target = target::scripted_policy("key_corridor");
  // gamma = 0 keeps only the first reward of every episode.
  const auto b0 = estimate_baseline_return(*target, *env, 20, 0.0, 3);
  double first = 0.0;
  for (std::size_t k = 0; k < 20; ++k) {
    auto e = env->clone();
    const auto obs = e->reset(derive_seed(3, Stream::kBaseline, k)).observations;
    first += e->step(target::joint_action(*target, obs)).reward;
  }
  CHECK(b0.mean == doctest::Approx(first / 20.0).epsilon(1e-12));

  const auto a = estimate_baseline_return(*target, *env, 50, 0.99, 4, 1);
  const auto b = estimate_baseline_return(*target, *env, 50, 0.99, 4, 3);
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
  CHECK_THROWS_AS(estimate_baseline_return(*target, *env, 0, 0.99, 4), Error);
}

TEST_CASE("baseline return matches an independent re-simulation") {
  const auto target = target::scripted_policy("key_corridor");
  envs::KeyCorridor env;
  const auto est = estimate_baseline_return(*target, env, 500, 0.99, 21);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t k = 0; k < 500; ++k) {
    envs::KeyCorridor e;
    auto obs = e.reset(derive_seed(21, Stream::kBaseline, k)).observations;
    double ret = 0.0;
    for (int t = 0; !e.done(); ++t) {
      std::vector<int> a;
      for (std::size_t i = 0; i < 3; ++i) a.push_back(target->act(obs[i], i));
      auto s = e.step(a);
      ret += std::pow(0.99, t) * s.reward;
      obs = s.observations;
    }
    sum += ret;
    sum_sq += ret * ret;
  }
  const double mean = sum / 500.0;
  CHECK(std::fabs(est.mean - mean) < 1e-9);
  const double var = (sum_sq - 500.0 * mean * mean) / 499.0;
  CHECK(est.se == doctest::Approx(std::sqrt(var / 500.0)).epsilon(1e-6));
}

TEST_CASE("all-zero mask reproduces the unmasked trajectory; all-one mask is uniform") {
  const auto target = target::scripted_policy("key_corridor");
  envs::KeyCorridor a, b;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto oa = a.reset(seed).observations;
    auto ob = b.reset(seed).observations;
    Rng rng(seed);
    while (!a.done()) {
      const auto sa = a.step(target::joint_action(*target, oa));
      const auto sb = b.step(compose_actions(target::joint_action(*target, ob), MaskAction::none(3),
                                             b.spec().action_space, rng));
      CHECK(sa.next_state == sb.next_state);
      CHECK(sa.reward == sb.reward);
      oa = sa.observations;
      ob = sb.observations;
    }
  }
  Rng rng(5);
  std::vector<std::vector<std::size_t>> counts(3, std::vector<std::size_t>(5, 0));
  const std::vector<int> fixed{1, 2, 3};
  for (int k = 0; k < 10000; ++k) {
    const auto out = compose_actions(fixed, MaskAction::all(3), a.spec().action_space, rng);
    for (std::size_t i = 0; i < 3; ++i) ++counts[i][static_cast<std::size_t>(out[i])];
  }
  for (const auto& c : counts) CHECK(testing::chi_square_stat(c) < testing::chi_square_crit_01(4));
}

TEST_CASE("beta = lambda = 0 reduces to TD training on the masked process") {
  auto env = envs::make_env(envs::EnvConfig{});
  const auto target = target::scripted_policy("key_corridor");
  EmaiConfig cfg;
  cfg.beta = 0.0;
  cfg.lambda = 0.0;
  cfg.baseline_episodes = 5;
  cfg.training.steps = 2000;
  cfg.training.batch_episodes = 4;
  const auto out = train_emai(*target, *env, cfg);
  for (const auto& p : out.curve) CHECK(p.loss_total == p.loss_td);
  CHECK(out.policy.params().beta == 0.0);
  CHECK(out.env_steps >= 2000);
}

TEST_CASE("masking checkpoint round trip") {
  auto env = envs::make_env(envs::EnvConfig{});
  const auto target = target::scripted_policy("key_corridor");
  EmaiConfig cfg;
  cfg.baseline_episodes = 5;
  cfg.training.steps = 300;
  cfg.training.batch_episodes = 4;
  const auto out = train_emai(*target, *env, cfg);
  const auto path = std::filesystem::temp_directory_path() / "emai_masking_rt.json";
  out.policy.save(path, out.env_steps);
  const auto back = MaskingPolicy::load(path);
  CHECK(back.params().j_pi == out.policy.params().j_pi);
  CHECK(back.params().target_checksum == target_checksum(*target));
  const auto obs = env->reset(1).observations;
  CHECK(gaps(back.importance(obs)) == gaps(out.policy.importance(obs)));
  std::filesystem::remove(path);
}

TEST_CASE("mismatched target and environment are rejected") {
  auto env = envs::make_env(envs::EnvConfig{"spread", 3, 8, 0.99, "none"});
  const auto target = target::scripted_policy("key_corridor");
  try {
    train_emai(*target, *env, EmaiConfig{});
    FAIL("expected incompatibility");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIncompatible);
  }
}
