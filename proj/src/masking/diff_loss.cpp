#include "masking/diff_loss.hpp"

#include "common/error.hpp"

namespace emai::masking {

std::string to_string(DiffMode m) {
  switch (m) {
    case DiffMode::kLiteral: return "literal";
    case DiffMode::kRealized: return "realized";
    case DiffMode::kInitial: return "initial";
  }
  return "literal";
}

DiffMode diff_mode_from_string(const std::string& s) {
  if (s == "literal") return DiffMode::kLiteral;
  if (s == "realized") return DiffMode::kRealized;
  if (s == "initial") return DiffMode::kInitial;
  fail(ErrorCode::kConfig, "unknown emai.diff_mode '" + s + "' (expected literal, realized or initial)");
}

nn::Tensor diff_loss(const ctde::BatchValues& values, std::span<const ctde::Episode* const> batch, double j_pi,
                     double gamma, DiffMode mode) {
  const std::size_t episodes = batch.size();
  require(episodes > 0 && values.offsets.size() == episodes + 1, ErrorCode::kInvalidArgument,
          "diff_loss: values do not match the batch");
  const std::size_t rows = values.offsets.back();
  require(values.q_tot.rows() == rows, ErrorCode::kInvalidArgument, "diff_loss: q_tot rows do not match the batch");

  // Discount weights G[e, t] = gamma^t on episode e's rows, so G * Q_tot sums
  // each episode's discounted values.
  std::vector<double> g(episodes * rows, 0.0);
  std::vector<double> shift(episodes, 0.0);
  for (std::size_t e = 0; e < episodes; ++e) {
    const ctde::Episode& ep = *batch[e];
    require(ep.steps == values.offsets[e + 1] - values.offsets[e], ErrorCode::kInvalidArgument,
            "diff_loss: episode length does not match values");
    double disc = 1.0;
    double realized = 0.0, bonus = 0.0;
    for (std::size_t t = 0; t < ep.steps; ++t) {
      if (mode == DiffMode::kLiteral || t == 0) g[e * rows + values.offsets[e] + t] = disc;
      realized += disc * (ep.rewards[t] - ep.bonus[t]);
      bonus += disc * ep.bonus[t];
      disc *= gamma;
    }
    shift[e] = mode == DiffMode::kRealized ? j_pi - realized : j_pi + bonus;
  }
  const nn::Tensor s(episodes, 1, std::move(shift));
  if (mode == DiffMode::kRealized) return nn::mean(nn::square(s));
  const nn::Tensor sums = nn::matmul(nn::Tensor(episodes, rows, std::move(g)), values.q_tot);
  return nn::mean(nn::square(s - sums));
}

}  // namespace emai::masking
