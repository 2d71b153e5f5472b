#include "aniso_dbvp/aniso_dbvp.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "aniso_dbvp/app.hpp"
#include "aniso_dbvp/config.hpp"
#include "aniso_dbvp/functional.hpp"

struct adbvp_config {
  adbvp::ConfigDocument doc;
};

struct adbvp_instance {
  std::shared_ptr<const adbvp::ProblemInstance> inst;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

adbvp_status to_status(int exit_code) {
  switch (exit_code) {
    case adbvp::exit_ok: return ADBVP_OK;
    case adbvp::exit_hypothesis_failed: return ADBVP_HYPOTHESIS_FAILED;
    case adbvp::exit_no_convergence: return ADBVP_NO_CONVERGENCE;
    default: return ADBVP_CONFIG_ERROR;
  }
}

std::string error_text(adbvp::Errc code, const std::string& msg, std::optional<std::size_t> offset = std::nullopt) {
  return adbvp::error_object(code, msg, offset).dump(2) + "\n";
}

/// Runs fn, mapping exceptions to a status and storing the error object.
template <typename Fn>
int guarded(Fn&& fn) {
  last_error.clear();
  try {
    return fn();
  } catch (const adbvp::ParseError& e) {
    last_error = error_text(e.code(), e.what(), e.offset());
    return adbvp::exit_code_for(e.code());
  } catch (const adbvp::Error& e) {
    last_error = error_text(e.code(), e.what());
    return adbvp::exit_code_for(e.code());
  } catch (const std::exception& e) {
    last_error = error_text(adbvp::Errc::invalid_argument, e.what());
    return ADBVP_INTERNAL_ERROR;
  }
}

adbvp_status make_config(adbvp_config** out, const auto& load) {
  if (!out) return ADBVP_INVALID_ARGUMENT;
  *out = nullptr;
  const int rc = guarded([&] {
    *out = new adbvp_config{load()};
    return 0;
  });
  return rc == 0 ? ADBVP_OK : rc == ADBVP_INTERNAL_ERROR ? ADBVP_INTERNAL_ERROR : to_status(rc);
}

int invalid(const char* msg) {
  last_error = error_text(adbvp::Errc::invalid_argument, msg);
  return ADBVP_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* adbvp_version(void) { return "0.1.0"; }

adbvp_status adbvp_config_from_json(const char* json_text, adbvp_config** out) {
  if (!json_text) return static_cast<adbvp_status>(invalid("json_text is null"));
  return make_config(out, [&] { return adbvp::parse_config_text(json_text); });
}

adbvp_status adbvp_config_from_file(const char* path, adbvp_config** out) {
  if (!path) return static_cast<adbvp_status>(invalid("path is null"));
  return make_config(out, [&] { return adbvp::load_config_file(path); });
}

adbvp_status adbvp_config_from_example(const char* example_id, adbvp_config** out) {
  if (!example_id) return static_cast<adbvp_status>(invalid("example_id is null"));
  return make_config(out, [&] { return adbvp::builtin_example(example_id); });
}

adbvp_status adbvp_config_apply_overrides(adbvp_config* cfg, const char* json_text) {
  if (!cfg || !json_text) return static_cast<adbvp_status>(invalid("null argument"));
  const int rc = guarded([&] {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw adbvp::Error(adbvp::Errc::config_error, std::string("overrides: ") + e.what());
    }
    adbvp::apply_overrides(cfg->doc, j);
    return 0;
  });
  return rc == ADBVP_INTERNAL_ERROR ? ADBVP_INTERNAL_ERROR : to_status(rc);
}

void adbvp_config_free(adbvp_config* cfg) { delete cfg; }

const char* adbvp_config_output_path(const adbvp_config* cfg) {
  if (!cfg || !cfg->doc.output.path) return nullptr;
  return cfg->doc.output.path->c_str();
}

char* adbvp_example_ids(void) {
  std::string s;
  for (const auto& id : adbvp::builtin_example_ids()) s += id + "\n";
  return dup(s);
}

adbvp_status adbvp_instance_create(const adbvp_config* cfg, adbvp_instance** out) {
  if (!cfg || !out) return static_cast<adbvp_status>(invalid("null argument"));
  *out = new adbvp_instance{cfg->doc.instance};
  return ADBVP_OK;
}

void adbvp_instance_free(adbvp_instance* inst) { delete inst; }

int adbvp_instance_T(const adbvp_instance* inst) { return inst ? inst->inst->T() : -1; }

adbvp_status adbvp_energy(const adbvp_instance* inst, const double* u, size_t n, double lambda, double* out_I) {
  if (!inst || !u || !out_I) return static_cast<adbvp_status>(invalid("null argument"));
  const int rc = guarded([&] {
    if (n != static_cast<size_t>(inst->inst->T() + 2)) throw adbvp::Error(adbvp::Errc::invalid_argument, "u must have T+2 values");
    const adbvp::GridFunction g(std::vector<double>(u, u + n));
    *out_I = adbvp::I_lambda(*inst->inst, g, lambda);
    return 0;
  });
  return rc == 0 ? ADBVP_OK : ADBVP_INVALID_ARGUMENT;
}

adbvp_status adbvp_residual(const adbvp_instance* inst, const double* u, size_t n, double lambda, double* out,
                            size_t out_n) {
  if (!inst || !u || !out) return static_cast<adbvp_status>(invalid("null argument"));
  const int rc = guarded([&] {
    const int T = inst->inst->T();
    if (n != static_cast<size_t>(T + 2)) throw adbvp::Error(adbvp::Errc::invalid_argument, "u must have T+2 values");
    if (out_n < static_cast<size_t>(T)) throw adbvp::Error(adbvp::Errc::invalid_argument, "out must hold T values");
    const adbvp::GridFunction g(std::vector<double>(u, u + n));
    const auto r = adbvp::residual(*inst->inst, g, lambda);
    std::copy(r.begin(), r.end(), out);
    return 0;
  });
  return rc == 0 ? ADBVP_OK : ADBVP_INVALID_ARGUMENT;
}

int adbvp_run(const adbvp_config* cfg, const char* command, char** out) {
  if (!out) return invalid("out is null");
  *out = nullptr;
  if (!cfg || !command) return invalid("null argument");
  std::string body;
  const int rc = guarded([&] {
    adbvp::CommandOutput res = adbvp::run_command(cfg->doc, command);
    body = std::move(res.body);
    return res.exit_code;
  });
  *out = dup(last_error.empty() ? body : last_error);
  return rc;
}

const char* adbvp_last_error(void) { return last_error.c_str(); }

void adbvp_string_free(char* s) { std::free(s); }

}  // extern "C"
