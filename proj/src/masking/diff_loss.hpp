#pragma once

#include "ctde/episode.hpp"
#include "ctde/learner.hpp"
#include "nn/tensor.hpp"

#include <span>
#include <string>

namespace emai::masking {

enum class DiffMode {
  kLiteral,   // D = J - sum_t gamma^t (Q_tot_t - R^m_t)
  kRealized,  // D = J - sum_t gamma^t r_t (environment reward only; carries no gradient)
  kInitial,   // D = J - (Q_tot_0 - sum_t gamma^t R^m_t), the telescoped sum
};

std::string to_string(DiffMode m);
DiffMode diff_mode_from_string(const std::string& s);

// Mean over the batch of D^2. `values` must come from evaluating `batch`.
// Each episode's rewards minus bonus is its environment reward; bonus is R^m.
nn::Tensor diff_loss(const ctde::BatchValues& values, std::span<const ctde::Episode* const> batch, double j_pi,
                     double gamma, DiffMode mode = DiffMode::kLiteral);

}  // namespace emai::masking
