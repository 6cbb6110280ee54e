#include "explain/explainer.hpp"

#include "common/error.hpp"

namespace emai::explain {

std::string to_string(ExplainerKind k) {
  switch (k) {
    case ExplainerKind::kEmai: return "emai";
    case ExplainerKind::kRandom: return "random";
    case ExplainerKind::kValueBased: return "value_based";
    case ExplainerKind::kGradientBased: return "gradient_based";
    case ExplainerKind::kMcOracle: return "mc_oracle";
  }
  return "unknown";
}

ExplainerKind explainer_kind_from_string(const std::string& s) {
  if (s == "emai") return ExplainerKind::kEmai;
  if (s == "random") return ExplainerKind::kRandom;
  if (s == "value_based" || s == "vb") return ExplainerKind::kValueBased;
  if (s == "gradient_based" || s == "gba") return ExplainerKind::kGradientBased;
  if (s == "mc_oracle" || s == "oracle") return ExplainerKind::kMcOracle;
  fail(ErrorCode::kConfig,
       "unknown explainer '" + s + "' (expected emai, random, value_based, gradient_based or mc_oracle)");
}

std::size_t most_critical(std::span<const double> scores) {
  require(!scores.empty(), ErrorCode::kInvalidArgument, "most_critical: no scores");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

}  // namespace emai::explain
