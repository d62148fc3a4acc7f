#pragma once

#include <map>
#include <string>
#include <string_view>

namespace pmllm {

/// Keyed prompt fragments. Text format: `key=value` starts a block, lines
/// beginning with `|` continue it, `#` lines and blank lines are skipped.
class PromptTemplates {
 public:
  static PromptTemplates parse(std::string_view text);

  /// The set compiled into the library from resources/prompt_templates.txt.
  static const PromptTemplates& builtin();

  bool contains(std::string_view key) const;
  const std::string& get(std::string_view key) const;

  /// get(key) with every `{name}` replaced by vars[name]; unknown
  /// placeholders are left as they are.
  std::string render(std::string_view key, const std::map<std::string, std::string>& vars) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace pmllm
