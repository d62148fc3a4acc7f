#include "pmllm/hypothesis.hpp"

#include <regex>
#include <set>

#include "json.hpp"
#include "pmllm/error.hpp"
#include "pmllm/prompt_templates.hpp"

namespace pmllm {
namespace {

using nlohmann::json;

constexpr std::size_t kResultRowsInPrompt = 20;

std::string fenced_block(std::string_view text, std::string_view lang) {
  std::size_t pos = 0;
  std::optional<std::string> first;
  while ((pos = text.find("```", pos)) != std::string_view::npos) {
    const auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) break;
    std::string tag(text.substr(pos + 3, eol - pos - 3));
    while (!tag.empty() && std::isspace(static_cast<unsigned char>(tag.back()))) tag.pop_back();
    const auto close = text.find("```", eol + 1);
    if (close == std::string_view::npos) break;
    std::string body(text.substr(eol + 1, close - eol - 1));
    if (tag == lang) return body;
    if (!first) first = body;
    pos = close + 3;
  }
  return first.value_or("");
}

std::string describe_outcome(const Hypothesis& h) {
  if (h.error) return "Error: " + *h.error + "\n";
  if (h.result) return "Result:\n" + h.result->to_text_table(kResultRowsInPrompt);
  return "Not executed.\n";
}

std::string hypothesis_block(const std::vector<Hypothesis>& hs, bool with_verdicts) {
  std::string out;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const auto& h = hs[i];
    out += "H" + std::to_string(i + 1) + ": " + h.description + "\n";
    out += "SQL: " + h.sql + "\n";
    out += describe_outcome(h);
    if (with_verdicts && h.verdict != Verdict::Pending && h.verdict != Verdict::Error) {
      out += "Verdict: " + std::string(to_string(h.verdict));
      if (!h.verdict_reason.empty()) out += " - " + h.verdict_reason;
      out += "\n";
    }
    out += "\n";
  }
  return out;
}

void execute_all(const SqlSession& session, std::vector<Hypothesis>& hs) {
  for (auto& h : hs) {
    try {
      h.result = session.execute(h.sql);
    } catch (const Error& e) {
      h.error = e.what();
      h.verdict = Verdict::Error;
      h.verdict_reason = e.what();
    }
  }
}

std::vector<HypothesisRound> loop(const SqlSession& session, std::vector<Abstraction> abstractions,
                                  const LLMConfig& cfg, Connector& connector, const HypothesisOptions& options) {
  if (options.max_rounds < 1) throw Error(ErrorCode::InvalidArgument, "max_rounds must be at least 1");
  const auto& t = PromptTemplates::builtin();
  std::vector<HypothesisRound> rounds;
  std::vector<ChatMessage> conversation{
      ChatMessage::user(build_hypothesis_prompt(abstractions, session.schema(), options.focus))};

  for (int r = 1; r <= options.max_rounds; ++r) {
    const std::string reply = chat_complete(cfg, conversation, connector);
    conversation.push_back(ChatMessage::assistant(reply));
    HypothesisRound round;
    round.round_index = r;
    if (r > 1) round.refined_from = r - 1;
    round.hypotheses = parse_hypotheses(reply);
    execute_all(session, round.hypotheses);

    std::vector<int> executed;
    for (std::size_t i = 0; i < round.hypotheses.size(); ++i)
      if (round.hypotheses[i].verdict != Verdict::Error) executed.push_back(static_cast<int>(i) + 1);

    if (!executed.empty()) {
      conversation.push_back(ChatMessage::user(t.get("hypothesis.verdict_intro") + "\n\n" +
                                               hypothesis_block(round.hypotheses, false) +
                                               t.get("hypothesis.verdict_format")));
      const std::string verdicts = chat_complete(cfg, conversation, connector);
      conversation.push_back(ChatMessage::assistant(verdicts));
      for (auto& [index, v] : parse_verdicts(verdicts, executed)) {
        auto& h = round.hypotheses[static_cast<std::size_t>(index - 1)];
        if (h.verdict == Verdict::Error) continue;
        h.verdict = v.first;
        h.verdict_reason = v.second;
      }
    }
    rounds.push_back(std::move(round));
    if (any_valid(rounds) || r == options.max_rounds) break;
    conversation.push_back(ChatMessage::user(t.get("hypothesis.refine_intro") + "\n\n" +
                                             hypothesis_block(rounds.back().hypotheses, true) +
                                             t.get("hypothesis.refine_request") + "\n" + t.get("hypothesis.format")));
  }
  return rounds;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pending: return "PENDING";
    case Verdict::Valid: return "VALID";
    case Verdict::Invalid: return "INVALID";
    case Verdict::Error: return "ERROR";
  }
  return "PENDING";
}

std::string build_hypothesis_prompt(const std::vector<Abstraction>& abstractions, const SchemaDescription& schema,
                                    const std::optional<std::string>& focus) {
  if (abstractions.empty()) throw Error(ErrorCode::InvalidArgument, "at least one abstraction is required");
  const auto& t = PromptTemplates::builtin();
  std::string out = t.get("hypothesis.intro") + "\n\n";
  for (const auto& a : abstractions) {
    out += a.text;
    if (a.truncated)
      out += t.render("insight.truncation_notice", {{"included", std::to_string(a.entries_included)},
                                                    {"total", std::to_string(a.entries_total)}}) + "\n";
    out += "\n";
  }
  out += t.get("nl2sql.schema_title") + "\n" + schema.render() + "\n";
  out += t.get("nl2sql.dialect_title") + "\n" + schema.dialect_note + "\n\n";
  if (focus && !focus->empty()) out += t.get("hypothesis.focus_title") + "\n" + *focus + "\n\n";
  out += t.get("hypothesis.format") + "\n";
  return out;
}

std::vector<Hypothesis> parse_hypotheses(std::string_view response) {
  std::string payload = fenced_block(response, "json");
  if (payload.empty()) {
    const auto open = response.find('[');
    const auto close = response.rfind(']');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
      throw Error(ErrorCode::MalformedHypotheses, "no JSON array of hypotheses in the response");
    payload = std::string(response.substr(open, close - open + 1));
  }
  json doc;
  try {
    doc = json::parse(payload);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedHypotheses, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty())
    throw Error(ErrorCode::MalformedHypotheses, "expected a non-empty JSON array of hypotheses");
  std::vector<Hypothesis> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const auto path = "/" + std::to_string(i);
    if (!item.is_object()) throw Error(ErrorCode::MalformedHypotheses, "hypothesis is not an object", path);
    for (const char* key : {"description", "sql"})
      if (!item.contains(key) || !item[key].is_string())
        throw Error(ErrorCode::MalformedHypotheses, std::string("missing string field ") + key, path + "/" + key);
    Hypothesis h;
    h.description = item["description"].get<std::string>();
    h.sql = item["sql"].get<std::string>();
    out.push_back(std::move(h));
  }
  return out;
}

HypothesisRound generate_hypotheses(const std::vector<Abstraction>& abstractions, const SchemaDescription& schema,
                                    const std::optional<std::string>& focus, const LLMConfig& cfg,
                                    Connector& connector) {
  const auto prompt = build_hypothesis_prompt(abstractions, schema, focus);
  HypothesisRound round;
  round.hypotheses = parse_hypotheses(chat_complete(cfg, {ChatMessage::user(prompt)}, connector));
  return round;
}

std::vector<std::pair<int, std::pair<Verdict, std::string>>> parse_verdicts(std::string_view response,
                                                                             const std::vector<int>& expected) {
  static const std::regex line_re(R"(^\W*H(\d+)\W*\s*:?\s*(VALID|INVALID)\b\s*(?:-|:|\xE2\x80\x94|\xE2\x80\x93)?\s*(.*)$)",
                                  std::regex::icase);
  std::vector<std::pair<int, std::pair<Verdict, std::string>>> out;
  std::set<int> seen;
  std::size_t pos = 0;
  const std::string text(response);
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (std::regex_match(line, m, line_re)) {
      const int index = std::stoi(m[1].str());
      std::string token = m[2].str();
      for (auto& c : token) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      std::string reason = m[3].str();
      while (!reason.empty() && std::isspace(static_cast<unsigned char>(reason.back()))) reason.pop_back();
      if (seen.insert(index).second)
        out.push_back({index, {token == "VALID" ? Verdict::Valid : Verdict::Invalid, reason}});
    }
    pos = end + 1;
  }
  for (int i : expected)
    if (!seen.contains(i))
      throw Error(ErrorCode::MalformedVerdicts, "no verdict for H" + std::to_string(i), "H" + std::to_string(i));
  return out;
}

std::vector<HypothesisRound> run_hypothesis_loop(const EventLog& log, const LLMConfig& cfg, Connector& connector,
                                                 const HypothesisOptions& options) {
  SqlSession session(log);
  std::vector<Abstraction> abstractions{abstract_dfg(compute_dfg(log), options.budget),
                                        abstract_log_attributes(log, options.budget)};
  return loop(session, std::move(abstractions), cfg, connector, options);
}

std::vector<HypothesisRound> run_hypothesis_loop(const Ocel& ocel, const LLMConfig& cfg, Connector& connector,
                                                 const HypothesisOptions& options) {
  SqlSession session(ocel);
  std::vector<Abstraction> abstractions{abstract_ocel_ocdfg(compute_ocdfg(ocel), options.budget),
                                        abstract_ocel_features(extract_ocel_features(ocel), options.budget)};
  return loop(session, std::move(abstractions), cfg, connector, options);
}

bool any_valid(const std::vector<HypothesisRound>& rounds) {
  for (const auto& r : rounds)
    for (const auto& h : r.hypotheses)
      if (h.verdict == Verdict::Valid) return true;
  return false;
}

std::string render_hypothesis_report(const std::vector<HypothesisRound>& rounds) {
  std::string out;
  for (const auto& r : rounds) {
    out += "Round " + std::to_string(r.round_index);
    if (r.refined_from) out += " (refines round " + std::to_string(*r.refined_from) + ")";
    out += "\n";
    for (std::size_t i = 0; i < r.hypotheses.size(); ++i) {
      const auto& h = r.hypotheses[i];
      out += "  H" + std::to_string(i + 1) + " [" + std::string(to_string(h.verdict)) + "] " + h.description + "\n";
      out += "    SQL: " + h.sql + "\n";
      if (h.result) {
        std::string table = h.result->to_text_table(kResultRowsInPrompt);
        std::size_t p = 0;
        while (p < table.size()) {
          const auto e = table.find('\n', p);
          out += "    | " + table.substr(p, e - p) + "\n";
          p = e == std::string::npos ? table.size() : e + 1;
        }
      }
      if (!h.verdict_reason.empty()) out += "    Reason: " + h.verdict_reason + "\n";
    }
  }
  out += any_valid(rounds) ? "Outcome: a hypothesis was validated.\n" : "Outcome: no hypothesis was validated.\n";
  return out;
}

}  // namespace pmllm
