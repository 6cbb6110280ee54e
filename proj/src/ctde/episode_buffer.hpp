#pragma once

#include "common/rng.hpp"
#include "ctde/episode.hpp"

#include <deque>
#include <vector>

namespace emai::ctde {

// FIFO store of whole episodes.
class EpisodeBuffer {
 public:
  explicit EpisodeBuffer(std::size_t capacity);

  void add(Episode episode);
  std::size_t size() const { return episodes_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Episode& at(std::size_t i) const { return episodes_.at(i); }

  // Uniform sampling with replacement; identical rng state gives identical batches.
  std::vector<const Episode*> sample(std::size_t batch, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::deque<Episode> episodes_;
};

}  // namespace emai::ctde
