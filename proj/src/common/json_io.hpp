#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace emai {

nlohmann::json read_json_file(const std::filesystem::path& path);
// Writes pretty-printed JSON with a trailing newline; creates parent directories.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace emai
