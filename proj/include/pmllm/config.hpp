#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "pmllm/error.hpp"
#include "pmllm/llm.hpp"

namespace pmllm {

/// Recognised keys: base_url, model, api_key_env, timeout_seconds,
/// max_retries, renderer, max_chars.
using Settings = std::map<std::string, std::string>;

struct CliConfig {
  LLMConfig llm;
  std::string renderer;
  std::size_t max_chars = 10000;
};

/// Flat `key=value` lines; `#` comments and blank lines are skipped.
/// Throws ConfigError on malformed lines or unknown keys.
Settings parse_config_text(std::string_view text);
Settings load_config_file(const std::filesystem::path& path);

/// PMLLM_BASE_URL, PMLLM_MODEL, PMLLM_API_KEY_ENV, PMLLM_TIMEOUT_SECONDS,
/// PMLLM_MAX_RETRIES, PMLLM_RENDERER and PMLLM_MAX_CHARS.
Settings settings_from_environment(const std::function<const char*(const char*)>& getenv_fn = std::getenv);

/// Flags override the file, the file overrides the environment.
CliConfig resolve_config(const Settings& flags, const Settings& file, const Settings& env);

/// CLI exit status for an error: 2 input, 3 usage, 4 SQL, 5 model exchange,
/// 6 image rendering.
int exit_code_for(ErrorCode code);

}  // namespace pmllm
