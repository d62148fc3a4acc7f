#include "pmllm/llm.hpp"

#include <openssl/evp.h>

#include <regex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "pmllm/error.hpp"
#include "pmllm/log_io.hpp"
#include "pmllm/prompt_templates.hpp"
#include "pmllm/visualization.hpp"

namespace pmllm {
namespace {

using nlohmann::json;

std::string excerpt(std::string_view body, std::size_t n = 200) {
  return std::string(body.substr(0, n));
}

struct Endpoint {
  std::string scheme_host_port;
  std::string host;
  std::string path;
};

Endpoint parse_base_url(const std::string& base_url) {
  static const std::regex re(R"(^(https?)://(\[[^\]]+\]|[^/:]+)(:\d+)?(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(base_url, m, re))
    throw Error(ErrorCode::ConfigError, "base_url must be an absolute http(s) URL", base_url);
  Endpoint e;
  e.scheme_host_port = m[1].str() + "://" + m[2].str() + m[3].str();
  e.host = m[2].str();
  std::string path = m[4].str();
  while (!path.empty() && path.back() == '/') path.pop_back();
  e.path = path + "/chat/completions";
  return e;
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

std::string_view to_string(Role r) {
  switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

ChatMessage ChatMessage::system(std::string text) { return {Role::System, {TextPart{std::move(text)}}}; }
ChatMessage ChatMessage::user(std::string text) { return {Role::User, {TextPart{std::move(text)}}}; }
ChatMessage ChatMessage::assistant(std::string text) { return {Role::Assistant, {TextPart{std::move(text)}}}; }

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

bool is_png(std::string_view bytes) { return bytes.starts_with("\x89PNG\r\n\x1a\n"); }

std::string build_request_body(const std::string& model, const std::vector<ChatMessage>& messages) {
  if (messages.empty()) throw Error(ErrorCode::InvalidArgument, "messages must not be empty");
  json msgs = json::array();
  for (const auto& m : messages) {
    const bool text_only =
        std::all_of(m.parts.begin(), m.parts.end(), [](const auto& p) { return std::holds_alternative<TextPart>(p); });
    json content;
    if (text_only) {
      std::string text;
      for (const auto& p : m.parts) text += std::get<TextPart>(p).text;
      content = text;
    } else {
      if (m.role != Role::User) throw Error(ErrorCode::InvalidArgument, "image parts are only allowed in user messages");
      content = json::array();
      for (const auto& p : m.parts) {
        if (auto* t = std::get_if<TextPart>(&p)) {
          content.push_back({{"type", "text"}, {"text", t->text}});
        } else {
          const auto& img = std::get<ImagePart>(p);
          content.push_back({{"type", "image_url"},
                             {"image_url", {{"url", "data:" + img.media_type + ";base64," + img.base64}}}});
        }
      }
    }
    msgs.push_back({{"role", std::string(to_string(m.role))}, {"content", std::move(content)}});
  }
  json body{{"model", model}, {"messages", std::move(msgs)}};
  return body.dump();
}

std::string parse_completion_response(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedResponse, std::string("response is not JSON: ") + e.what());
  }
  const json* content = nullptr;
  if (doc.is_object() && doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
    const auto& choice = doc["choices"][0];
    if (choice.is_object() && choice.contains("message") && choice["message"].is_object() &&
        choice["message"].contains("content"))
      content = &choice["message"]["content"];
  }
  if (!content) throw Error(ErrorCode::MalformedResponse, "response has no choices[0].message.content");
  if (content->is_string()) return content->get<std::string>();
  if (content->is_array()) {
    std::string text;
    for (const auto& part : *content)
      if (part.is_object() && part.value("type", "") == "text" && part.contains("text") && part["text"].is_string())
        text += part["text"].get<std::string>();
    return text;
  }
  throw Error(ErrorCode::MalformedResponse, "message content is neither text nor a list of parts");
}

std::string HttpConnector::complete(const LLMConfig& cfg, const std::vector<ChatMessage>& messages) {
  const char* key = cfg.api_key_env.empty() ? nullptr : std::getenv(cfg.api_key_env.c_str());
  if (!key || !*key)
    throw Error(ErrorCode::AuthMissing, "environment variable " + cfg.api_key_env + " is not set", cfg.api_key_env);
  const auto endpoint = parse_base_url(cfg.base_url);
  const std::string body = build_request_body(cfg.model, messages);
  const auto timeout = std::chrono::seconds(std::max(1, cfg.timeout_seconds));

  httplib::Client client(endpoint.scheme_host_port);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  client.set_bearer_token_auth(key);

  auto delay = cfg.backoff_base;
  for (int attempt = 0;; ++attempt) {
    const bool last = attempt >= cfg.max_retries;
    targets_.push_back(endpoint.host);
    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(endpoint.path, body, "application/json");
    if (res) {
      if (res->status >= 200 && res->status < 300) return parse_completion_response(res->body);
      if (last || !retryable_status(res->status))
        throw Error(ErrorCode::HttpStatus, "HTTP " + std::to_string(res->status) + ": " + excerpt(res->body),
                    std::to_string(res->status));
    } else if (last) {
      const auto err = res.error();
      const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                             (err == httplib::Error::Read && std::chrono::steady_clock::now() - started >= timeout);
      if (timed_out) throw Error(ErrorCode::Timeout, "request timed out after " + std::to_string(timeout.count()) + " s");
      throw Error(ErrorCode::Transport, httplib::to_string(err), endpoint.host);
    }
    if (sleep) sleep(delay);
    else std::this_thread::sleep_for(delay);
    delay *= 2;
  }
}

MockConnector::MockConnector(std::vector<std::string> responses) : responses_(std::move(responses)) {}

MockConnector MockConnector::from_transcript(std::string_view text) {
  std::vector<std::string> blocks(1);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (line == "---") blocks.emplace_back();
    else blocks.back().append(line).append("\n");
    pos = end + 1;
  }
  for (auto& b : blocks) {
    while (!b.empty() && (b.back() == '\n' || b.back() == ' ')) b.pop_back();
    const auto first = b.find_first_not_of("\n");
    b.erase(0, first == std::string::npos ? b.size() : first);
  }
  if (!blocks.empty() && blocks.back().empty() && blocks.size() > 1) blocks.pop_back();
  return MockConnector(std::move(blocks));
}

MockConnector MockConnector::from_file(const std::filesystem::path& path) {
  return from_transcript(read_text_file(path));
}

std::string MockConnector::complete(const LLMConfig& cfg, const std::vector<ChatMessage>& messages) {
  requests_.push_back(build_request_body(cfg.model, messages));
  if (next_ >= responses_.size())
    throw Error(ErrorCode::MalformedResponse, "transcript exhausted after " + std::to_string(responses_.size()) + " responses");
  return responses_[next_++];
}

std::string chat_complete(const LLMConfig& cfg, const std::vector<ChatMessage>& messages, Connector& connector) {
  if (messages.empty()) throw Error(ErrorCode::InvalidArgument, "messages must not be empty");
  return connector.complete(cfg, messages);
}

std::string explain_visualization(const std::filesystem::path& doc_path, std::string_view question,
                                  const LLMConfig& cfg, Connector& connector, const std::string& renderer) {
  if (question.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw Error(ErrorCode::InvalidArgument, "question must not be empty");
  std::string bytes = read_text_file(doc_path);
  if (!is_png(bytes)) {
    auto ext = doc_path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext != ".svg" && ext != ".dot" && ext != ".gv")
      throw Error(ErrorCode::UnsupportedImage, "only PNG, SVG and DOT documents are supported", doc_path.string());
    if (renderer.empty())
      throw Error(ErrorCode::RendererUnavailable, "no renderer configured to rasterize " + ext, doc_path.string());
    bytes = rasterize(bytes, renderer);
    if (!is_png(bytes))
      throw Error(ErrorCode::UnsupportedImage, "renderer output is not a PNG image", renderer);
  }
  ChatMessage msg{Role::User, {TextPart{std::string(question)}, ImagePart{"image/png", base64_encode(bytes)}}};
  return chat_complete(cfg, {std::move(msg)}, connector);
}

std::string build_insight_prompt(const Abstraction& abstraction, std::string_view question) {
  if (question.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw Error(ErrorCode::InvalidArgument, "question must not be empty");
  std::string prompt = abstraction.text;
  if (abstraction.truncated) {
    if (!prompt.empty() && !prompt.ends_with('\n')) prompt += '\n';
    prompt += PromptTemplates::builtin().render(
        "insight.truncation_notice", {{"included", std::to_string(abstraction.entries_included)},
                                      {"total", std::to_string(abstraction.entries_total)}});
  }
  while (prompt.ends_with('\n')) prompt.pop_back();
  prompt += "\n\n";
  prompt += question;
  return prompt;
}

std::string direct_insight_query(const Abstraction& abstraction, std::string_view question, const LLMConfig& cfg,
                                 Connector& connector) {
  return chat_complete(cfg, {ChatMessage::user(build_insight_prompt(abstraction, question))}, connector);
}

}  // namespace pmllm
