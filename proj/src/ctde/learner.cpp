#include "ctde/learner.hpp"

#include "common/error.hpp"

#include <algorithm>

namespace emai::ctde {

using nn::Tensor;

double td_target(double reward, double gamma, double next_max_q_tot, bool terminal) {
  return terminal ? reward : reward + gamma * next_max_q_tot;
}

QLearner::QLearner(AgentQNet net, Mixer mixer, LearnerConfig cfg)
    : net_(std::move(net)),
      mixer_(std::move(mixer)),
      stale_net_(net_),
      stale_mixer_(mixer_),
      cfg_(cfg) {
  require(cfg_.stale_interval > 0, ErrorCode::kInvalidArgument, "stale refresh interval must be positive");
  stale_net_.mlp().set_requires_grad(false);
  stale_mixer_.set_requires_grad(false);
  optimizer_ = std::make_unique<nn::Adam>(cfg_.adam, parameters());
  next_refresh_ = cfg_.stale_interval;
}

std::vector<Tensor> QLearner::parameters() const {
  std::vector<Tensor> params = net_.mlp().parameters();
  const auto mp = mixer_.parameters();
  params.insert(params.end(), mp.begin(), mp.end());
  return params;
}

BatchValues QLearner::evaluate(std::span<const Episode* const> batch) const {
  require(!batch.empty(), ErrorCode::kInvalidArgument, "td training needs a non-empty batch");
  const std::size_t n = net_.n_agents();
  const std::size_t d = net_.obs_dim();
  const std::size_t sd = mixer_.state_dim();

  BatchValues out;
  out.offsets.push_back(0);
  std::size_t total = 0;
  for (const Episode* ep : batch) {
    require(ep->n_agents == n && ep->obs_dim == d, ErrorCode::kInvalidArgument,
            "td training: episode shape does not match the agent network");
    total += ep->steps;
    out.offsets.push_back(total);
  }
  require(total > 0, ErrorCode::kInvalidArgument, "td training: batch has no transitions");

  std::vector<double> obs_cur, obs_next, st_cur, st_next, rewards;
  std::vector<int> actions;
  std::vector<char> terminal;
  obs_cur.reserve(total * n * d);
  obs_next.reserve(total * n * d);
  st_cur.reserve(total * sd);
  st_next.reserve(total * sd);
  for (const Episode* ep : batch) {
    const std::size_t block = n * d;
    obs_cur.insert(obs_cur.end(), ep->obs.begin(), ep->obs.begin() + static_cast<std::ptrdiff_t>(ep->steps * block));
    obs_next.insert(obs_next.end(), ep->obs.begin() + static_cast<std::ptrdiff_t>(block), ep->obs.end());
    st_cur.insert(st_cur.end(), ep->states.begin(), ep->states.begin() + static_cast<std::ptrdiff_t>(ep->steps * sd));
    st_next.insert(st_next.end(), ep->states.begin() + static_cast<std::ptrdiff_t>(sd), ep->states.end());
    actions.insert(actions.end(), ep->actions.begin(), ep->actions.end());
    rewards.insert(rewards.end(), ep->rewards.begin(), ep->rewards.end());
    terminal.insert(terminal.end(), ep->terminal.begin(), ep->terminal.end());
  }

  const Tensor q_all = net_.forward(net_.make_inputs(obs_cur, total * n));
  const Tensor chosen = nn::reshape(nn::gather_cols(q_all, actions), total, n);
  out.q_tot = mixer_.forward(chosen, Tensor(total, sd, std::move(st_cur)));

  const Tensor q_next = stale_net_.forward(stale_net_.make_inputs(obs_next, total * n));
  const std::size_t a = q_next.cols();
  std::vector<double> next_max(total * n);
  for (std::size_t r = 0; r < total * n; ++r) {
    const auto row = q_next.data().subspan(r * a, a);
    next_max[r] = *std::max_element(row.begin(), row.end());
  }
  const Tensor q_hat = stale_mixer_.forward(Tensor(total, n, std::move(next_max)), Tensor(total, sd, std::move(st_next)));
  out.targets.resize(total);
  for (std::size_t r = 0; r < total; ++r) {
    out.targets[r] = td_target(rewards[r], cfg_.gamma, q_hat.data()[r], terminal[r] != 0);
  }
  return out;
}

Tensor QLearner::td_loss(const BatchValues& values) const {
  const Tensor y(values.targets.size(), 1, values.targets);
  return nn::mean(nn::square(y - values.q_tot));
}

TrainStats QLearner::train_step(std::span<const Episode* const> batch, const ExtraLoss& extra) {
  optimizer_->zero_grad();
  const BatchValues values = evaluate(batch);
  const Tensor td = td_loss(values);
  TrainStats stats;
  stats.td = td.item();
  Tensor total = td;
  if (extra) {
    const Tensor e = extra(values, batch);
    stats.extra = e.item();
    total = td + e;
  }
  stats.total = total.item();
  total.backward();
  if (cfg_.grad_clip > 0.0) nn::clip_grad_norm(optimizer_->parameters(), cfg_.grad_clip);
  optimizer_->step();
  return stats;
}

void QLearner::on_env_steps(std::int64_t total_env_steps) {
  bool due = false;
  while (next_refresh_ <= total_env_steps) {
    due = true;
    next_refresh_ += cfg_.stale_interval;
  }
  if (due) refresh_stale();
}

void QLearner::refresh_stale() {
  stale_net_.mlp().copy_values_from(net_.mlp());
  stale_mixer_.copy_values_from(mixer_);
  ++refreshes_;
}

}  // namespace emai::ctde
