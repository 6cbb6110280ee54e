#pragma once

#include "common/rng.hpp"
#include "envs/environment.hpp"

#include <span>
#include <string>
#include <vector>

namespace emai::explain {

enum class Access { kBlackBox, kWhiteBox };

enum class ExplainerKind { kEmai, kRandom, kValueBased, kGradientBased, kMcOracle };

std::string to_string(ExplainerKind k);
ExplainerKind explainer_kind_from_string(const std::string& s);

// What an explainer may look at for one time-step.
struct ExplainContext {
  const envs::Observations& observations;
  std::span<const double> state;
  int t = 0;
  const envs::Environment* env = nullptr;  // live environment at time t; needed by the oracle
  Rng* rng = nullptr;                      // needed by stochastic explainers
};

class Explainer {
 public:
  virtual ~Explainer() = default;

  virtual ExplainerKind kind() const = 0;
  virtual Access access() const = 0;
  virtual std::string id() const = 0;

  // One finite score per agent; larger means more important.
  virtual std::vector<double> explain(const ExplainContext& ctx) const = 0;
};

// Argmax, lowest index on ties.
std::size_t most_critical(std::span<const double> scores);

}  // namespace emai::explain
