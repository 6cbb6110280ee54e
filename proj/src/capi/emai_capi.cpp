#include "emai/emai.h"

#include "app/commands.hpp"
#include "common/error.hpp"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

struct emai_run {
  emai::app::RunConfig cfg;
  std::string summary = "{}";
};

namespace {

thread_local std::string g_last_error;

emai_status to_status(emai::ErrorCode code) {
  switch (code) {
    case emai::ErrorCode::kConfig:
    case emai::ErrorCode::kInvalidArgument: return EMAI_ERR_CONFIG;
    case emai::ErrorCode::kMissingArtifact: return EMAI_ERR_MISSING_ARTIFACT;
    case emai::ErrorCode::kNumeric: return EMAI_ERR_NUMERIC;
    case emai::ErrorCode::kIncompatible: return EMAI_ERR_INCOMPATIBLE;
    default: return EMAI_ERR_GENERIC;
  }
}

template <typename F>
emai_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return EMAI_OK;
  } catch (const emai::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EMAI_ERR_GENERIC;
  }
}

template <typename F>
emai_status run_command(emai_run* run, F&& f) {
  if (!run) {
    g_last_error = "null run handle";
    return EMAI_ERR_GENERIC;
  }
  return guarded([&] { run->summary = f(run->cfg).summary.dump(); });
}

}  // namespace

extern "C" {

emai_status emai_run_create(const char* config_path, const char* const* overrides, size_t n_overrides,
                            emai_run** out) {
  if (!out) {
    g_last_error = "null output pointer";
    return EMAI_ERR_GENERIC;
  }
  *out = nullptr;
  return guarded([&] {
    std::vector<std::string> ov;
    for (size_t i = 0; i < n_overrides; ++i) ov.emplace_back(overrides[i]);
    auto run = std::make_unique<emai_run>();
    run->cfg = emai::app::load_config(config_path ? config_path : "", ov);
    *out = run.release();
  });
}

void emai_run_destroy(emai_run* run) { delete run; }

const char* emai_run_output_dir(const emai_run* run) { return run ? run->cfg.output_dir.c_str() : ""; }

const char* emai_run_summary(const emai_run* run) { return run ? run->summary.c_str() : "{}"; }

emai_status emai_train_target(emai_run* run) { return run_command(run, emai::app::train_target_cmd); }
emai_status emai_train_emai(emai_run* run) { return run_command(run, emai::app::train_emai_cmd); }
emai_status emai_explain(emai_run* run, size_t episodes) {
  return run_command(run, [episodes](const emai::app::RunConfig& c) { return emai::app::explain_cmd(c, episodes); });
}
emai_status emai_eval_fidelity(emai_run* run) { return run_command(run, emai::app::eval_fidelity_cmd); }
emai_status emai_attack(emai_run* run) { return run_command(run, emai::app::attack_cmd); }
emai_status emai_patch(emai_run* run) { return run_command(run, emai::app::patch_cmd); }

emai_status emai_render(const char* replay_path, const char* mode, char** out) {
  if (!out || !replay_path || !mode) {
    g_last_error = "null argument";
    return EMAI_ERR_GENERIC;
  }
  *out = nullptr;
  return guarded([&] {
    const std::string text = emai::app::render_cmd(replay_path, mode);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void emai_free(void* p) { std::free(p); }

const char* emai_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
