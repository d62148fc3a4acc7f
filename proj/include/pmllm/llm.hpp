#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pmllm/abstraction.hpp"

namespace pmllm {

struct LLMConfig {
  std::string base_url;                      // e.g. https://api.openai.com/v1
  std::string model = "gpt-4o";
  std::string api_key_env = "OPENAI_API_KEY";
  int timeout_seconds = 60;
  int max_retries = 2;
  std::chrono::milliseconds backoff_base{1000};  // waits are base, 2*base, 4*base, ...
};

enum class Role { System, User, Assistant };
std::string_view to_string(Role r);

struct TextPart {
  std::string text;
};
struct ImagePart {
  std::string media_type;  // e.g. image/png
  std::string base64;
};
using MessagePart = std::variant<TextPart, ImagePart>;

struct ChatMessage {
  Role role = Role::User;
  std::vector<MessagePart> parts;

  static ChatMessage system(std::string text);
  static ChatMessage user(std::string text);
  static ChatMessage assistant(std::string text);
};

std::string base64_encode(std::string_view bytes);
bool is_png(std::string_view bytes);

/// Chat-completions request body. Messages made only of text collapse their
/// content to a plain string. Throws InvalidArgument for an empty message
/// list or an image outside a user message.
std::string build_request_body(const std::string& model, const std::vector<ChatMessage>& messages);

/// Text of choices[0].message.content. Throws MalformedResponse.
std::string parse_completion_response(std::string_view body);

class Connector {
 public:
  virtual ~Connector() = default;
  virtual std::string complete(const LLMConfig& cfg, const std::vector<ChatMessage>& messages) = 0;
};

/// POST <base_url>/chat/completions with bearer authentication. Transport
/// failures and HTTP 429/5xx are retried up to max_retries times.
class HttpConnector : public Connector {
 public:
  std::string complete(const LLMConfig& cfg, const std::vector<ChatMessage>& messages) override;

  /// Replaces the wait between retries (tests record instead of sleeping).
  /// Empty means std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;

  /// Hosts contacted so far, one entry per attempt.
  const std::vector<std::string>& targets() const { return targets_; }

 private:
  std::vector<std::string> targets_;
};

/// Offline connector answering from a transcript: responses separated by
/// lines consisting of `---`. Every request body is recorded.
class MockConnector : public Connector {
 public:
  explicit MockConnector(std::vector<std::string> responses);
  static MockConnector from_transcript(std::string_view text);
  static MockConnector from_file(const std::filesystem::path& path);

  std::string complete(const LLMConfig& cfg, const std::vector<ChatMessage>& messages) override;

  const std::vector<std::string>& requests() const { return requests_; }
  std::size_t remaining() const { return responses_.size() - next_; }

 private:
  std::vector<std::string> responses_;
  std::size_t next_ = 0;
  std::vector<std::string> requests_;
};

/// Throws InvalidArgument for an empty message list, AuthMissing when the
/// key variable is unset (HTTP connector only), plus connector errors.
std::string chat_complete(const LLMConfig& cfg, const std::vector<ChatMessage>& messages,
                          Connector& connector);

/// One user message with the question and the image. PNG files are sent as
/// they are; SVG and DOT documents are rasterized with `renderer` first.
std::string explain_visualization(const std::filesystem::path& doc_path, std::string_view question,
                                  const LLMConfig& cfg, Connector& connector,
                                  const std::string& renderer = {});

/// Abstraction text, a truncation notice when entries were dropped, a blank
/// line, then the question.
std::string build_insight_prompt(const Abstraction& abstraction, std::string_view question);
std::string direct_insight_query(const Abstraction& abstraction, std::string_view question,
                                 const LLMConfig& cfg, Connector& connector);

}  // namespace pmllm
