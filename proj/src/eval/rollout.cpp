#include "eval/rollout.hpp"

namespace emai::eval {

EpisodeResult run_episode(const envs::Environment& proto, std::uint64_t reset_seed, const DecideFn& decide,
                          const RecordInfo* record) {
  auto env = proto.clone();
  auto reset = env->reset(reset_seed);
  envs::Observations obs = std::move(reset.observations);
  std::optional<replay::Recorder> recorder;
  if (record) recorder.emplace(*env, reset_seed, record->target_id, record->explainer_id);
  EpisodeResult out;
  while (!env->done()) {
    std::optional<replay::StepRecord> rec;
    if (recorder) rec = replay::capture(*env);
    StepDecision d = decide(*env, obs);
    auto step = env->step(d.final_actions);
    out.reward_sum += step.reward;
    if (rec) {
      rec->target_actions = std::move(d.target_actions);
      rec->mask_actions = std::move(d.mask);
      rec->final_actions = std::move(d.final_actions);
      rec->reward = step.reward;
      rec->importance = d.importance.empty() ? std::vector<double>(obs.size(), 0.0) : std::move(d.importance);
      recorder->push(std::move(*rec));
    }
    obs = std::move(step.observations);
  }
  if (recorder) out.record = recorder->finish();
  return out;
}

}  // namespace emai::eval
