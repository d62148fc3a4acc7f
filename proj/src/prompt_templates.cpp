#include "pmllm/prompt_templates.hpp"

#include "pmllm/error.hpp"
#include "prompt_templates_data.hpp"

namespace pmllm {

PromptTemplates PromptTemplates::parse(std::string_view text) {
  PromptTemplates t;
  std::string* current = nullptr;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '|') {
      if (!current)
        throw Error(ErrorCode::ConfigError,
                    "continuation before any key at line " + std::to_string(line_no));
      *current += '\n';
      *current += line.substr(1);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw Error(ErrorCode::ConfigError, "expected key=value at line " + std::to_string(line_no));
    auto [it, inserted] = t.entries_.emplace(std::string(line.substr(0, eq)),
                                             std::string(line.substr(eq + 1)));
    if (!inserted)
      throw Error(ErrorCode::ConfigError, "duplicate key '" + it->first + "'", it->first);
    current = &it->second;
  }
  return t;
}

const PromptTemplates& PromptTemplates::builtin() {
  static const PromptTemplates templates = parse(detail::kPromptTemplates);
  return templates;
}

bool PromptTemplates::contains(std::string_view key) const { return entries_.contains(key); }

const std::string& PromptTemplates::get(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end())
    throw Error(ErrorCode::ConfigError, "no prompt template '" + std::string(key) + "'",
                std::string(key));
  return it->second;
}

std::string PromptTemplates::render(std::string_view key,
                                    const std::map<std::string, std::string>& vars) const {
  const auto& tmpl = get(key);
  std::string out;
  out.reserve(tmpl.size());
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i);
      if (close != std::string::npos) {
        auto it = vars.find(tmpl.substr(i + 1, close - i - 1));
        if (it != vars.end()) {
          out += it->second;
          i = close;
          continue;
        }
      }
    }
    out += tmpl[i];
  }
  return out;
}

}  // namespace pmllm
