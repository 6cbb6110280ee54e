#pragma once

#include "replay/record.hpp"

#include <string>

namespace emai::replay {

enum class RenderMode { kAscii, kCsv };

RenderMode render_mode_from_string(const std::string& s);

// ascii: one grid per step, agents drawn as their index and the most
// critical agent as '*'. csv: t,agent,importance,masked,critical rows.
std::string render(const EpisodeRecord& record, RenderMode mode);

}  // namespace emai::replay
