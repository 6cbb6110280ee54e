#pragma once

#include "explain/explainer.hpp"
#include "explain/whitebox.hpp"
#include "masking/masking_policy.hpp"
#include "target/target_policy.hpp"

#include <memory>

namespace emai::explain {

struct ExplainerOptions {
  ExplainerKind kind = ExplainerKind::kEmai;
  std::shared_ptr<const masking::MaskingPolicy> masker;  // kEmai
  int oracle_rollouts = 64;                               // kMcOracle
  int workers = 1;                                        // kMcOracle
  GradNorm grad_norm = GradNorm::kL1;                     // kGradientBased
};

// Capability checks happen here: white-box kinds reject scripted targets,
// EMAI rejects a masking policy trained for another environment.
std::shared_ptr<const Explainer> make_explainer(const ExplainerOptions& opts, const target::TargetPtr& target);

}  // namespace emai::explain
