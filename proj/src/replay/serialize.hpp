#pragma once

#include "replay/record.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace emai::replay {

// Line 1 is the header, then one JSON object per step. Reals carry 9
// significant digits.
std::string serialize(const EpisodeRecord& record);

// Rejects malformed lines (naming the line), unknown versions, and headers
// whose reward sum or step count disagrees with the steps.
EpisodeRecord parse(std::string_view text);

// Several records concatenated (one file per command run).
std::string serialize_many(const std::vector<EpisodeRecord>& records);
std::vector<EpisodeRecord> parse_many(std::string_view text);

void write_replays(const std::filesystem::path& path, const std::vector<EpisodeRecord>& records);
std::vector<EpisodeRecord> read_replays(const std::filesystem::path& path);

}  // namespace emai::replay
