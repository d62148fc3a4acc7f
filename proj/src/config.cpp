#include "pmllm/config.hpp"

#include <charconv>
#include <set>

#include "pmllm/error.hpp"
#include "pmllm/log_io.hpp"

namespace pmllm {
namespace {

const std::map<std::string, std::string>& env_names() {
  static const std::map<std::string, std::string> names{
      {"base_url", "PMLLM_BASE_URL"},       {"model", "PMLLM_MODEL"},
      {"api_key_env", "PMLLM_API_KEY_ENV"}, {"timeout_seconds", "PMLLM_TIMEOUT_SECONDS"},
      {"max_retries", "PMLLM_MAX_RETRIES"}, {"renderer", "PMLLM_RENDERER"},
      {"max_chars", "PMLLM_MAX_CHARS"},
  };
  return names;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, s.find_last_not_of(" \t\r") - b + 1));
}

long long to_int(const std::string& key, const std::string& value, long long min) {
  long long out = 0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || end != value.data() + value.size() || out < min)
    throw Error(ErrorCode::ConfigError, key + " must be an integer >= " + std::to_string(min), value);
  return out;
}

}  // namespace

Settings parse_config_text(std::string_view text) {
  Settings out;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigError, "expected key=value", "line " + std::to_string(line_no));
    const auto key = trim(line.substr(0, eq));
    if (!env_names().contains(key)) throw Error(ErrorCode::ConfigError, "unknown configuration key", key);
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

Settings load_config_file(const std::filesystem::path& path) { return parse_config_text(read_text_file(path)); }

Settings settings_from_environment(const std::function<const char*(const char*)>& getenv_fn) {
  Settings out;
  for (const auto& [key, var] : env_names())
    if (const char* v = getenv_fn(var.c_str()); v && *v) out[key] = v;
  return out;
}

CliConfig resolve_config(const Settings& flags, const Settings& file, const Settings& env) {
  Settings merged = env;
  for (const auto& [k, v] : file) merged[k] = v;
  for (const auto& [k, v] : flags) merged[k] = v;
  CliConfig cfg;
  for (const auto& [key, value] : merged) {
    if (key == "base_url") cfg.llm.base_url = value;
    else if (key == "model") cfg.llm.model = value;
    else if (key == "api_key_env") cfg.llm.api_key_env = value;
    else if (key == "timeout_seconds") cfg.llm.timeout_seconds = static_cast<int>(to_int(key, value, 1));
    else if (key == "max_retries") cfg.llm.max_retries = static_cast<int>(to_int(key, value, 0));
    else if (key == "renderer") cfg.renderer = value;
    else if (key == "max_chars") cfg.max_chars = static_cast<std::size_t>(to_int(key, value, 0));
    else throw Error(ErrorCode::ConfigError, "unknown configuration key", key);
  }
  return cfg;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingColumn:
    case ErrorCode::TimestampParse:
    case ErrorCode::EmptyLog:
    case ErrorCode::XmlParse:
    case ErrorCode::MissingStandardAttribute:
    case ErrorCode::IoError:
    case ErrorCode::SchemaViolation:
    case ErrorCode::DanglingReference:
    case ErrorCode::EmptyOcel:
    case ErrorCode::NonBipartiteArc:
      return 2;
    case ErrorCode::UnknownCase:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ConfigError:
      return 3;
    case ErrorCode::SqlParse:
    case ErrorCode::NonSelectStatement:
    case ErrorCode::UnknownTableOrColumn:
    case ErrorCode::ExecutionError:
    case ErrorCode::NoSqlFound:
      return 4;
    case ErrorCode::AuthMissing:
    case ErrorCode::HttpStatus:
    case ErrorCode::Timeout:
    case ErrorCode::Transport:
    case ErrorCode::MalformedResponse:
    case ErrorCode::MalformedHypotheses:
    case ErrorCode::MalformedVerdicts:
      return 5;
    case ErrorCode::UnsupportedImage:
    case ErrorCode::RendererUnavailable:
      return 6;
  }
  return 3;
}

}  // namespace pmllm
