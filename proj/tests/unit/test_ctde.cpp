#include <doctest.h>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "ctde/agent_qnet.hpp"
#include "ctde/checkpoint.hpp"
#include "ctde/episode_buffer.hpp"
#include "ctde/exploration.hpp"
#include "ctde/learner.hpp"
#include "ctde/mixer.hpp"
#include "helpers.hpp"

#include <filesystem>

using namespace emai;
using namespace emai::ctde;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = scale * (2.0 * uniform01(rng) - 1.0);
  return v;
}

// One-step episode with given actions and reward; observations and states are
// fixed so only the actions distinguish transitions.
Episode one_step(std::span<const int> actions, double reward, std::size_t n, std::size_t d, std::size_t sd) {
  EpisodeBuilder b(n, d, sd);
  std::vector<std::vector<double>> obs(n, std::vector<double>(d, 0.5));
  std::vector<double> state(sd, 0.25);
  b.begin(obs, state);
  b.add(actions, reward, 0.0, obs, state, true);
  return b.finish();
}

}  // namespace

TEST_CASE("zero-weight agent network gives zero Q") {
  Rng rng(1);
  AgentQNet net(4, 3, 5, 16, rng);
  net.mlp().fill(0.0);
  for (double q : net.q_values(std::vector<double>{0.1, 0.2, 0.3, 0.4}, 1)) CHECK(q == 0.0);
}

TEST_CASE("agent id changes the input and the output") {
  Rng rng(2);
  AgentQNet net(4, 3, 5, 16, rng);
  const std::vector<double> obs{0.1, -0.2, 0.3, 0.4};
  CHECK(net.q_values(obs, 0) != net.q_values(obs, 1));
  CHECK(net.q_values(obs, 2) == net.q_values(obs, 2));
  CHECK_THROWS_AS(net.q_values(std::vector<double>{0.1, 0.2}, 0), Error);
  CHECK_THROWS_AS(net.q_values(obs, 3), Error);
}

TEST_CASE("vdn sums") {
  Rng rng(3);
  Mixer vdn(MixerKind::kVdn, 3, 2, 8, 8, rng);
  CHECK(vdn.q_total(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 2.0, -0.5}) == doctest::Approx(2.5));
  CHECK(vdn.parameters().empty());
}

TEST_CASE("monotonic mixer never decreases when one input grows") {
  Rng rng(4);
  int checked = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    const std::size_t n = 2 + uniform_index(rng, 3);
    Mixer m(MixerKind::kMonotonic, n, 5, 8, 16, rng);
    const auto state = random_vec(5, rng);
    auto q = random_vec(n, rng, 3.0);
    const std::size_t i = uniform_index(rng, n);
    const double delta = 1e-3 + 2.0 * uniform01(rng);
    const double before = m.q_total(state, q);
    q[i] += delta;
    CHECK(m.q_total(state, q) >= before);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("per-agent greedy masks equal the joint argmax (IGM)") {
  Rng rng(5);
  for (std::size_t n = 2; n <= 4; ++n) {
    for (int draw = 0; draw < 500; ++draw) {
      Mixer m(MixerKind::kMonotonic, n, 4, 8, 16, rng);
      const auto state = random_vec(4, rng);
      std::vector<std::array<double, 2>> q(n);
      for (auto& qi : q) qi = {3.0 * (2.0 * uniform01(rng) - 1.0), 3.0 * (2.0 * uniform01(rng) - 1.0)};
      std::vector<int> greedy(n);
      for (std::size_t i = 0; i < n; ++i) greedy[i] = argmax(q[i]);
      // Exhaustive enumeration over {0,1}^n.
      double best = -1e300;
      std::vector<int> best_joint;
      for (unsigned code = 0; code < (1u << n); ++code) {
        std::vector<double> chosen(n);
        std::vector<int> joint(n);
        for (std::size_t i = 0; i < n; ++i) {
          joint[i] = static_cast<int>((code >> i) & 1u);
          chosen[i] = q[i][static_cast<std::size_t>(joint[i])];
        }
        const double v = m.q_total(state, chosen);
        if (v > best) {
          best = v;
          best_joint = joint;
        }
      }
      CHECK(greedy == best_joint);
    }
  }
}

TEST_CASE("td target and per-transition loss") {
  const double y = td_target(1.0, 0.99, 2.0, false);
  CHECK(y == doctest::Approx(2.98));
  CHECK((y - 2.5) * (y - 2.5) == doctest::Approx(0.2304));
  CHECK(td_target(0.0, 0.99, 123.0, true) == 0.0);
}

TEST_CASE("td loss through the learner") {
  Rng rng(6);
  AgentQNet net(2, 2, 3, 8, rng);
  Mixer vdn(MixerKind::kVdn, 2, 2, 8, 8, rng);
  net.mlp().fill(0.0);
  QLearner learner(std::move(net), std::move(vdn), LearnerConfig{});
  const int a[] = {0, 1};
  const Episode ep = one_step(a, 0.0, 2, 2, 2);
  const Episode* batch[] = {&ep};
  const auto values = learner.evaluate(batch);
  CHECK(values.targets[0] == 0.0);
  CHECK(learner.td_loss(values).item() == 0.0);

  // reward 1, Q_tot = 2.5 from a bias-only network, terminal -> (1 - 2.5)^2.
  auto& params = learner.net().mlp().parameters();
  for (auto& b : params.back().mutable_data()) b = 1.25;
  const Episode ep2 = one_step(a, 1.0, 2, 2, 2);
  const Episode* batch2[] = {&ep2};
  CHECK(learner.td_loss(learner.evaluate(batch2)).item() == doctest::Approx(2.25));
}

TEST_CASE("stale copies refresh only at multiples of C and hold targets fixed") {
  Rng rng(7);
  AgentQNet net(2, 2, 3, 8, rng);
  Mixer mixer(MixerKind::kMonotonic, 2, 2, 8, 8, rng);
  LearnerConfig cfg;
  cfg.stale_interval = 200;
  QLearner learner(std::move(net), std::move(mixer), cfg);

  EpisodeBuilder b(2, 2, 2);
  std::vector<std::vector<double>> o0{{0.1, 0.2}, {0.3, 0.4}}, o1{{0.5, 0.6}, {0.7, 0.8}};
  b.begin(o0, std::vector<double>{0.1, 0.2});
  const int act[] = {1, 2};
  b.add(act, 0.3, 0.0, o1, std::vector<double>{0.3, 0.4}, false);
  b.add(act, 0.1, 0.0, o0, std::vector<double>{0.5, 0.6}, true);
  const Episode ep = b.finish();
  const Episode* batch[] = {&ep};

  const auto y0 = learner.evaluate(batch).targets;
  learner.train_step(batch);
  learner.train_step(batch);
  learner.on_env_steps(199);
  CHECK(learner.refresh_count() == 0);
  CHECK(learner.evaluate(batch).targets == y0);
  learner.on_env_steps(200);
  CHECK(learner.refresh_count() == 1);
  CHECK(learner.evaluate(batch).targets != y0);
  learner.on_env_steps(399);
  CHECK(learner.refresh_count() == 1);
  learner.on_env_steps(400);
  CHECK(learner.refresh_count() == 2);
}

TEST_CASE("one-step cooperative task converges to the best joint action") {
  // Payoff matrix indexed [a0][a1]; the unique optimum is (1, 1).
  const double payoff[3][3] = {{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 0.5}};
  Rng rng(8);
  AgentQNet net(2, 2, 3, 16, rng);
  Mixer mixer(MixerKind::kMonotonic, 2, 2, 8, 16, rng);
  LearnerConfig cfg;
  cfg.adam.lr = 5e-3;
  QLearner learner(std::move(net), std::move(mixer), cfg);
  EpisodeBuffer buffer(500);
  Rng explore(9), sample(10);
  for (int step = 1; step <= 2000; ++step) {
    const int a[] = {static_cast<int>(uniform_index(explore, 3)), static_cast<int>(uniform_index(explore, 3))};
    buffer.add(one_step(a, payoff[a[0]][a[1]], 2, 2, 2));
    learner.on_env_steps(step);
    if (buffer.size() >= 32) learner.train_step(buffer.sample(32, sample));
  }
  // Exhaustive oracle over the 9 joint actions.
  int best0 = 0, best1 = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (payoff[i][j] > payoff[best0][best1]) {
        best0 = i;
        best1 = j;
      }
    }
  }
  const std::vector<double> obs(2, 0.5);
  CHECK(argmax(learner.net().q_values(obs, 0)) == best0);
  CHECK(argmax(learner.net().q_values(obs, 1)) == best1);
}

TEST_CASE("epsilon greedy") {
  Rng rng(11);
  const std::vector<double> q{0.1, 0.9};
  CHECK(epsilon_greedy(q, 0.0, rng) == 1);
  const std::vector<double> tie{0.5, 0.5};
  CHECK(epsilon_greedy(tie, 0.0, rng) == 0);
  std::vector<std::size_t> counts(5, 0);
  const std::vector<double> five{0.0, 1.0, 2.0, 3.0, 4.0};
  for (int i = 0; i < 10000; ++i) ++counts[static_cast<std::size_t>(epsilon_greedy(five, 1.0, rng))];
  CHECK(testing::chi_square_stat(counts) < testing::chi_square_crit_01(4));
  CHECK_THROWS_AS(epsilon_greedy(q, 1.5, rng), Error);
}

TEST_CASE("epsilon schedule anneals linearly then holds") {
  EpsilonSchedule s;
  CHECK(s.value(0) == 1.0);
  CHECK(s.value(25000) == doctest::Approx(0.525));
  CHECK(s.value(50000) == doctest::Approx(0.05));
  CHECK(s.value(90000) == doctest::Approx(0.05));
}

TEST_CASE("episode buffer is FIFO and sampling is seed-reproducible") {
  EpisodeBuffer buf(3);
  const int a[] = {0, 0};
  for (int k = 0; k < 5; ++k) buf.add(one_step(a, static_cast<double>(k), 2, 2, 2));
  CHECK(buf.size() == 3);
  CHECK(buf.at(0).rewards[0] == 2.0);
  CHECK(buf.at(2).rewards[0] == 4.0);
  Rng r1(12), r2(12);
  const auto s1 = buf.sample(8, r1);
  const auto s2 = buf.sample(8, r2);
  CHECK(s1 == s2);
}

TEST_CASE("checkpoint round trip and errors") {
  Rng rng(13);
  AgentQNet net(3, 2, 4, 8, rng);
  Mixer mixer(MixerKind::kMonotonic, 2, 3, 4, 8, rng);
  CheckpointHeader h;
  h.kind = "target";
  h.env = "spread";
  h.n_agents = 2;
  h.obs_dim = 3;
  h.n_actions = 4;
  h.mixer = "monotonic";
  h.training_step = 17;
  const auto path = std::filesystem::temp_directory_path() / "emai_ctde_checkpoint.json";
  save_checkpoint(path, h, net, mixer);
  const Checkpoint back = load_checkpoint(path);
  CHECK(back.header.training_step == 17);
  CHECK(back.header.env == "spread");
  const std::vector<double> obs{0.1, 0.2, 0.3};
  CHECK(back.net.q_values(obs, 1) == net.q_values(obs, 1));
  const std::vector<double> st{0.1, 0.2, 0.3}, q{0.5, -0.5};
  CHECK(back.mixer.q_total(st, q) == mixer.q_total(st, q));
  std::filesystem::remove(path);
  try {
    load_checkpoint(path);
    FAIL("expected missing artifact");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingArtifact);
  }
}
