#include "explain/whitebox.hpp"

#include "common/error.hpp"
#include "ctde/exploration.hpp"
#include "target/privileged.hpp"

#include <algorithm>
#include <cmath>

namespace emai::explain {

namespace {

// A private copy with frozen parameters, so gradient queries never write into
// the shared target.
ctde::AgentQNet frozen_copy(const target::TargetPolicy& target, const char* who) {
  const ctde::AgentQNet* net = target::privileged_qnet(target);
  require(net != nullptr, ErrorCode::kIncompatible,
          std::string(who) + " explainer needs white-box access to a learned target; '" + target.id() +
              "' exposes no value network");
  ctde::AgentQNet copy = *net;
  copy.mlp().set_requires_grad(false);
  return copy;
}

void check_agents(const ctde::AgentQNet& net, const ExplainContext& ctx) {
  require(ctx.observations.size() == net.n_agents(), ErrorCode::kIncompatible,
          "white-box explainer: environment has " + std::to_string(ctx.observations.size()) +
              " agents, target network has " + std::to_string(net.n_agents()));
}

}  // namespace

GradNorm grad_norm_from_string(const std::string& s) {
  if (s == "l1") return GradNorm::kL1;
  if (s == "l2") return GradNorm::kL2;
  fail(ErrorCode::kConfig, "unknown gradient norm '" + s + "' (expected l1 or l2)");
}

ValueBasedExplainer::ValueBasedExplainer(const target::TargetPolicy& target)
    : net_(frozen_copy(target, "value_based")) {}

std::vector<double> ValueBasedExplainer::explain(const ExplainContext& ctx) const {
  check_agents(net_, ctx);
  std::vector<double> scores;
  for (std::size_t i = 0; i < ctx.observations.size(); ++i) {
    const auto q = net_.q_values(ctx.observations[i], i);
    scores.push_back(*std::max_element(q.begin(), q.end()));
  }
  return scores;
}

GradientBasedExplainer::GradientBasedExplainer(const target::TargetPolicy& target, GradNorm norm)
    : net_(frozen_copy(target, "gradient_based")), norm_(norm) {}

std::vector<double> GradientBasedExplainer::explain(const ExplainContext& ctx) const {
  check_agents(net_, ctx);
  const std::size_t d = net_.obs_dim();
  std::vector<double> scores;
  for (std::size_t i = 0; i < ctx.observations.size(); ++i) {
    nn::Tensor input = net_.make_input(ctx.observations[i], i);
    input.set_requires_grad(true);
    const nn::Tensor q = net_.forward(input);
    const int a = ctde::argmax(q.data());
    const nn::Tensor logp = nn::gather_cols(nn::log_softmax_rows(q), std::vector<int>{a});
    logp.backward();
    const auto g = input.grad();
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += norm_ == GradNorm::kL1 ? std::fabs(g[j]) : g[j] * g[j];
    scores.push_back(norm_ == GradNorm::kL1 ? s : std::sqrt(s));
  }
  return scores;
}

}  // namespace emai::explain
