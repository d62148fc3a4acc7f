#include "wire_schema.hpp"

#include <regex>
#include <set>

#include "json.hpp"

namespace wire {

using nlohmann::json;

std::vector<std::string> validate_request(std::string_view body) {
  std::vector<std::string> errs;
  json doc;
  try {
    doc = json::parse(body);
  } catch (const std::exception& e) {
    return {std::string("not JSON: ") + e.what()};
  }
  if (!doc.is_object()) return {"body is not an object"};
  for (const auto& [k, v] : doc.items())
    if (k != "model" && k != "messages") errs.push_back("unexpected key " + k);
  if (!doc.contains("model") || !doc["model"].is_string() || doc["model"].get<std::string>().empty())
    errs.push_back("model must be a non-empty string");
  if (!doc.contains("messages") || !doc["messages"].is_array() || doc["messages"].empty()) {
    errs.push_back("messages must be a non-empty array");
    return errs;
  }
  static const std::set<std::string> roles{"system", "user", "assistant"};
  static const std::regex data_url(R"(^data:image/[a-z0-9.+-]+;base64,[A-Za-z0-9+/]+={0,2}$)");
  for (std::size_t i = 0; i < doc["messages"].size(); ++i) {
    const auto& m = doc["messages"][i];
    const auto where = "messages[" + std::to_string(i) + "]";
    if (!m.is_object()) {
      errs.push_back(where + " is not an object");
      continue;
    }
    for (const auto& [k, v] : m.items())
      if (k != "role" && k != "content") errs.push_back(where + " unexpected key " + k);
    if (!m.contains("role") || !m["role"].is_string() || !roles.contains(m["role"].get<std::string>()))
      errs.push_back(where + ".role invalid");
    if (!m.contains("content")) {
      errs.push_back(where + ".content missing");
      continue;
    }
    const auto& c = m["content"];
    if (c.is_string()) continue;
    if (!c.is_array() || c.empty()) {
      errs.push_back(where + ".content must be a string or non-empty array");
      continue;
    }
    for (std::size_t j = 0; j < c.size(); ++j) {
      const auto& p = c[j];
      const auto pw = where + ".content[" + std::to_string(j) + "]";
      if (!p.is_object() || !p.contains("type") || !p["type"].is_string()) {
        errs.push_back(pw + " needs a type");
        continue;
      }
      const auto type = p["type"].get<std::string>();
      if (type == "text") {
        if (p.size() != 2 || !p.contains("text") || !p["text"].is_string()) errs.push_back(pw + " bad text part");
      } else if (type == "image_url") {
        if (m.value("role", "") != "user") errs.push_back(pw + " image outside a user message");
        if (p.size() != 2 || !p.contains("image_url") || !p["image_url"].is_object() ||
            p["image_url"].size() != 1 || !p["image_url"].contains("url") || !p["image_url"]["url"].is_string() ||
            !std::regex_match(p["image_url"]["url"].get<std::string>(), data_url))
          errs.push_back(pw + " bad image part");
      } else {
        errs.push_back(pw + " unknown part type " + type);
      }
    }
  }
  return errs;
}

int count_image_parts(std::string_view body) {
  int n = 0;
  const auto doc = json::parse(body);
  for (const auto& m : doc.at("messages"))
    if (m["content"].is_array())
      for (const auto& p : m["content"])
        if (p.value("type", "") == "image_url") ++n;
  return n;
}

}  // namespace wire
