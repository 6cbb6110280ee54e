#include "ctde/episode_buffer.hpp"

#include "common/error.hpp"

namespace emai::ctde {

EpisodeBuffer::EpisodeBuffer(std::size_t capacity) : capacity_(capacity) {
  require(capacity > 0, ErrorCode::kInvalidArgument, "episode buffer capacity must be positive");
}

void EpisodeBuffer::add(Episode episode) {
  if (episodes_.size() == capacity_) episodes_.pop_front();
  episodes_.push_back(std::move(episode));
}

std::vector<const Episode*> EpisodeBuffer::sample(std::size_t batch, Rng& rng) const {
  require(!episodes_.empty(), ErrorCode::kInvalidArgument, "cannot sample from an empty episode buffer");
  std::vector<const Episode*> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    out.push_back(&episodes_[static_cast<std::size_t>(uniform_index(rng, static_cast<int>(episodes_.size())))]);
  }
  return out;
}

}  // namespace emai::ctde
