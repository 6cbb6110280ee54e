#pragma once

#include "app/config.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace emai::app {

// What a command wrote: its directory (holding manifest.json) and a short
// machine-readable summary.
struct CommandResult {
  std::filesystem::path dir;
  nlohmann::json summary;
};

CommandResult train_target_cmd(const RunConfig& cfg);
CommandResult train_emai_cmd(const RunConfig& cfg);
CommandResult explain_cmd(const RunConfig& cfg, std::size_t episodes);
CommandResult eval_fidelity_cmd(const RunConfig& cfg);
CommandResult attack_cmd(const RunConfig& cfg);
CommandResult patch_cmd(const RunConfig& cfg);

std::string render_cmd(const std::filesystem::path& replay, const std::string& mode);

}  // namespace emai::app
