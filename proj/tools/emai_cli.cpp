#include <emai/emai.h>

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace {

struct RunOptions {
  std::string config;
  std::vector<std::string> set;
  std::optional<int> workers;
  std::optional<unsigned long long> seed;
  std::string out;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("-c,--config", o.config, "run config (JSON); omitted: built-in defaults");
  cmd->add_option("--set", o.set, "override one key, e.g. --set eval.episodes=100")->take_all();
  cmd->add_option("--workers", o.workers, "parallel rollout bound (1 = bitwise deterministic)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("-o,--output-dir", o.out, "output directory");
}

int fail_with(emai_status s) {
  std::fprintf(stderr, "emai: %s\n", emai_last_error());
  return static_cast<int>(s);
}

template <typename F>
int run(const RunOptions& o, F&& command) {
  std::vector<std::string> set = o.set;
  if (o.workers) set.push_back("workers=" + std::to_string(*o.workers));
  if (o.seed) set.push_back("seed=" + std::to_string(*o.seed));
  if (!o.out.empty()) set.push_back("output_dir=\"" + o.out + "\"");
  std::vector<const char*> argv;
  for (const auto& s : set) argv.push_back(s.c_str());
  emai_run* r = nullptr;
  emai_status s = emai_run_create(o.config.c_str(), argv.data(), argv.size(), &r);
  if (s != EMAI_OK) return fail_with(s);
  s = command(r);
  if (s != EMAI_OK) {
    emai_run_destroy(r);
    return fail_with(s);
  }
  std::printf("%s\n%s\n", emai_run_output_dir(r), emai_run_summary(r));
  emai_run_destroy(r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EMAI: agent-level explanations for multi-agent policies"};
  app.require_subcommand(1);

  RunOptions o;
  std::size_t episodes = 5;
  std::string replay_path, mode = "ascii";

  auto* train_target = app.add_subcommand("train-target", "train a CTDE target team");
  auto* train_emai = app.add_subcommand("train-emai", "train masking agents against the target");
  auto* explain = app.add_subcommand("explain", "write importance-annotated replays");
  auto* fidelity = app.add_subcommand("eval-fidelity", "RRD fidelity report");
  auto* attack = app.add_subcommand("attack", "importance-guided observation-noise attack");
  auto* patch = app.add_subcommand("patch", "build a patch package and apply it");
  auto* render = app.add_subcommand("render", "render a replay file");
  for (auto* c : {train_target, train_emai, explain, fidelity, attack, patch}) add_run_options(c, o);
  explain->add_option("-n,--episodes", episodes, "episodes to record")->check(CLI::PositiveNumber);
  render->add_option("replay", replay_path, "replay file (.ndjson)")->required();
  render->add_option("-m,--mode", mode, "ascii or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(EMAI_ERR_CONFIG);
  }

  if (*train_target) return run(o, emai_train_target);
  if (*train_emai) return run(o, emai_train_emai);
  if (*explain) return run(o, [&](emai_run* r) { return emai_explain(r, episodes); });
  if (*fidelity) return run(o, emai_eval_fidelity);
  if (*attack) return run(o, emai_attack);
  if (*patch) return run(o, emai_patch);
  char* text = nullptr;
  const emai_status s = emai_render(replay_path.c_str(), mode.c_str(), &text);
  if (s != EMAI_OK) return fail_with(s);
  std::fputs(text, stdout);
  emai_free(text);
  return 0;
}
