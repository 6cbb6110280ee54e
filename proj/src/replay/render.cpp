#include "replay/render.hpp"

#include "common/error.hpp"

#include <cstdio>
#include <sstream>

namespace emai::replay {

namespace {

std::size_t critical(const std::vector<double>& importance) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < importance.size(); ++i) {
    if (importance[i] > importance[best]) best = i;
  }
  return best;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void ascii_step(std::ostringstream& out, const Header& h, const StepRecord& s) {
  const std::size_t c = critical(s.importance);
  out << "t=" << s.t << " reward=" << fmt(s.reward);
  if (s.door_open) out << " door=" << (*s.door_open ? "open" : "closed");
  out << " critical=" << c << '\n';
  if (h.width <= 0 || h.height <= 0) return;
  std::vector<std::string> grid(static_cast<std::size_t>(h.height), std::string(static_cast<std::size_t>(h.width), '.'));
  auto put = [&](envs::Cell cell, char ch) {
    if (cell.x >= 0 && cell.y >= 0 && cell.x < h.width && cell.y < h.height) {
      grid[static_cast<std::size_t>(cell.y)][static_cast<std::size_t>(cell.x)] = ch;
    }
  };
  for (const auto& w : s.walls) put(w, '#');
  for (const auto& l : s.landmarks) put(l, 'L');
  // Higher indices first so the lowest index wins a shared cell; the critical agent last.
  for (std::size_t i = s.agents.size(); i-- > 0;) put(s.agents[i], i < 10 ? static_cast<char>('0' + i) : '+');
  put(s.agents[c], '*');
  for (const auto& row : grid) out << row << '\n';
  out << "importance:";
  for (double v : s.importance) out << ' ' << fmt(v);
  out << '\n';
}

}  // namespace

RenderMode render_mode_from_string(const std::string& s) {
  if (s == "ascii") return RenderMode::kAscii;
  if (s == "csv") return RenderMode::kCsv;
  fail(ErrorCode::kConfig, "unknown render mode '" + s + "' (expected ascii or csv)");
}

std::string render(const EpisodeRecord& record, RenderMode mode) {
  std::ostringstream out;
  if (mode == RenderMode::kCsv) {
    out << "t,agent,importance,masked,critical\n";
    for (const auto& s : record.steps) {
      const std::size_t c = critical(s.importance);
      for (std::size_t i = 0; i < s.importance.size(); ++i) {
        const int masked = s.mask_actions ? (*s.mask_actions)[i] : 0;
        out << s.t << ',' << i << ',' << fmt(s.importance[i]) << ',' << masked << ',' << (i == c ? 1 : 0) << '\n';
      }
    }
    return out.str();
  }
  const auto& h = record.header;
  out << "# " << h.env << " seed=" << h.seed << " target=" << h.target_id << " explainer=" << h.explainer_id
      << " steps=" << h.steps << " reward_sum=" << fmt(h.reward_sum) << '\n';
  for (const auto& s : record.steps) {
    ascii_step(out, h, s);
    out << '\n';
  }
  return out.str();
}

}  // namespace emai::replay
