#include "replay/serialize.hpp"

#include "common/error.hpp"
#include "common/json_io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

namespace emai::replay {

using nlohmann::json;

namespace {

json cells(const std::vector<envs::Cell>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back({c.x, c.y});
  return a;
}

std::vector<envs::Cell> cells_from(const json& a) {
  std::vector<envs::Cell> out;
  for (const auto& c : a) {
    if (!c.is_array() || c.size() != 2) throw std::runtime_error("cell must be [x, y]");
    out.push_back({c[0].get<int>(), c[1].get<int>()});
  }
  return out;
}

json reals(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(round9(x));
  return a;
}

json header_json(const Header& h) {
  return {{"v", h.v},
          {"kind", "header"},
          {"env", h.env},
          {"seed", h.seed},
          {"target_id", h.target_id},
          {"explainer_id", h.explainer_id},
          {"n_agents", h.n_agents},
          {"width", h.width},
          {"height", h.height},
          {"steps", h.steps},
          {"reward_sum", round9(h.reward_sum)}};
}

json step_json(const StepRecord& s) {
  json obs = json::array();
  for (const auto& o : s.observations) obs.push_back(reals(o));
  json j = {{"t", s.t},
            {"agents", cells(s.agents)},
            {"landmarks", cells(s.landmarks)},
            {"walls", cells(s.walls)},
            {"state", reals(s.state)},
            {"observations", obs},
            {"target_actions", s.target_actions},
            {"final_actions", s.final_actions},
            {"reward", round9(s.reward)},
            {"importance", reals(s.importance)}};
  j["door_open"] = s.door_open ? json(*s.door_open) : json(nullptr);
  j["mask_actions"] = s.mask_actions ? json(*s.mask_actions) : json(nullptr);
  return j;
}

void check_keys(const json& j, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw std::runtime_error("expected a JSON object");
  for (const auto& [k, _] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw std::runtime_error("unknown key '" + k + "'");
  }
}

Header header_from(const json& j) {
  check_keys(j, {"v", "kind", "env", "seed", "target_id", "explainer_id", "n_agents", "width", "height", "steps",
                 "reward_sum"});
  Header h;
  h.v = j.at("v").get<int>();
  if (h.v != kReplayVersion) throw std::runtime_error("unsupported replay version " + std::to_string(h.v));
  if (j.at("kind").get<std::string>() != "header") throw std::runtime_error("first line is not a header");
  h.env = j.at("env").get<std::string>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.target_id = j.at("target_id").get<std::string>();
  h.explainer_id = j.at("explainer_id").get<std::string>();
  h.n_agents = j.at("n_agents").get<std::size_t>();
  h.width = j.at("width").get<int>();
  h.height = j.at("height").get<int>();
  h.steps = j.at("steps").get<std::size_t>();
  h.reward_sum = j.at("reward_sum").get<double>();
  return h;
}

StepRecord step_from(const json& j, std::size_t n) {
  check_keys(j, {"t", "agents", "landmarks", "walls", "door_open", "state", "observations", "target_actions",
                 "mask_actions", "final_actions", "reward", "importance"});
  StepRecord s;
  s.t = j.at("t").get<int>();
  s.agents = cells_from(j.at("agents"));
  s.landmarks = cells_from(j.at("landmarks"));
  s.walls = cells_from(j.at("walls"));
  if (!j.at("door_open").is_null()) s.door_open = j.at("door_open").get<bool>();
  s.state = j.at("state").get<std::vector<double>>();
  s.observations = j.at("observations").get<std::vector<std::vector<double>>>();
  s.target_actions = j.at("target_actions").get<std::vector<int>>();
  if (!j.at("mask_actions").is_null()) s.mask_actions = j.at("mask_actions").get<std::vector<int>>();
  s.final_actions = j.at("final_actions").get<std::vector<int>>();
  s.reward = j.at("reward").get<double>();
  s.importance = j.at("importance").get<std::vector<double>>();
  if (s.agents.size() != n || s.observations.size() != n || s.target_actions.size() != n ||
      s.final_actions.size() != n || s.importance.size() != n || (s.mask_actions && s.mask_actions->size() != n)) {
    throw std::runtime_error("per-agent vectors must have length n_agents");
  }
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    const std::size_t stop = end == std::string_view::npos ? text.size() : end;
    lines.push_back(text.substr(pos, stop - pos));
    pos = stop + 1;
  }
  return lines;
}

[[noreturn]] void parse_fail(std::size_t line, std::size_t last_good, const std::string& what) {
  fail(ErrorCode::kParse, "replay line " + std::to_string(line) + ": " + what + " (last good line " +
                              std::to_string(last_good) + ")");
}

// Parses records starting at lines[i]; advances i past the record.
EpisodeRecord parse_one(const std::vector<std::string_view>& lines, std::size_t& i) {
  EpisodeRecord r;
  const std::size_t header_line = i + 1;
  try {
    r.header = header_from(json::parse(lines[i]));
  } catch (const std::exception& e) {
    parse_fail(header_line, header_line - 1, e.what());
  }
  ++i;
  double sum = 0.0;
  for (std::size_t k = 0; k < r.header.steps; ++k, ++i) {
    if (i >= lines.size()) {
      parse_fail(i + 1, i, "truncated: expected " + std::to_string(r.header.steps) + " steps, found " +
                               std::to_string(k));
    }
    try {
      StepRecord s = step_from(json::parse(lines[i]), r.header.n_agents);
      if (s.t != static_cast<int>(k)) throw std::runtime_error("non-contiguous t=" + std::to_string(s.t));
      sum += s.reward;
      r.steps.push_back(std::move(s));
    } catch (const std::exception& e) {
      parse_fail(i + 1, i, e.what());
    }
  }
  if (std::fabs(round9(sum) - r.header.reward_sum) > 1e-7 * std::max(1.0, std::fabs(sum))) {
    parse_fail(header_line, i, "header reward_sum does not match the step rewards");
  }
  return r;
}

}  // namespace

std::string serialize(const EpisodeRecord& record) {
  std::ostringstream ss;
  ss << header_json(record.header).dump() << '\n';
  for (const auto& s : record.steps) ss << step_json(s).dump() << '\n';
  return ss.str();
}

std::string serialize_many(const std::vector<EpisodeRecord>& records) {
  std::string out;
  for (const auto& r : records) out += serialize(r);
  return out;
}

std::vector<EpisodeRecord> parse_many(std::string_view text) {
  std::vector<std::string_view> lines = split_lines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::vector<EpisodeRecord> out;
  std::size_t i = 0;
  while (i < lines.size()) out.push_back(parse_one(lines, i));
  return out;
}

EpisodeRecord parse(std::string_view text) {
  auto records = parse_many(text);
  require(records.size() == 1, ErrorCode::kParse,
          "replay: expected exactly one episode, found " + std::to_string(records.size()));
  return std::move(records.front());
}

void write_replays(const std::filesystem::path& path, const std::vector<EpisodeRecord>& records) {
  write_text_file(path, serialize_many(records));
}

std::vector<EpisodeRecord> read_replays(const std::filesystem::path& path) {
  return parse_many(read_text_file(path));
}

}  // namespace emai::replay
