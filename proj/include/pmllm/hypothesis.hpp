#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmllm/abstraction.hpp"
#include "pmllm/llm.hpp"
#include "pmllm/query.hpp"

namespace pmllm {

enum class Verdict { Pending, Valid, Invalid, Error };
std::string_view to_string(Verdict v);

struct Hypothesis {
  std::string description;
  std::string sql;
  std::optional<QueryResult> result;
  std::optional<std::string> error;  // set when the SQL was rejected or failed
  Verdict verdict = Verdict::Pending;
  std::string verdict_reason;
};

struct HypothesisRound {
  int round_index = 1;
  std::vector<Hypothesis> hypotheses;
  std::optional<int> refined_from;
};

std::string build_hypothesis_prompt(const std::vector<Abstraction>& abstractions, const SchemaDescription& schema,
                                    const std::optional<std::string>& focus = std::nullopt);

/// Reads the first ```json block (or the first bare JSON array) as a list of
/// {description, sql}. Throws MalformedHypotheses.
std::vector<Hypothesis> parse_hypotheses(std::string_view response);

HypothesisRound generate_hypotheses(const std::vector<Abstraction>& abstractions, const SchemaDescription& schema,
                                    const std::optional<std::string>& focus, const LLMConfig& cfg,
                                    Connector& connector);

/// Lines `H<i>: VALID|INVALID - reason` (the separator may also be `:` or an
/// em dash). Every index in `expected` (1-based) must appear, otherwise
/// MalformedVerdicts is thrown.
std::vector<std::pair<int, std::pair<Verdict, std::string>>> parse_verdicts(std::string_view response,
                                                                             const std::vector<int>& expected);

struct HypothesisOptions {
  int max_rounds = 3;
  std::optional<std::string> focus;
  Budget budget{};
};

/// Generate, execute, judge, refine. Stops after the first round with a
/// valid hypothesis or after max_rounds rounds. SQL failures mark the
/// hypothesis as error and are reported back in the refinement prompt.
std::vector<HypothesisRound> run_hypothesis_loop(const EventLog& log, const LLMConfig& cfg, Connector& connector,
                                                 const HypothesisOptions& options = {});
std::vector<HypothesisRound> run_hypothesis_loop(const Ocel& ocel, const LLMConfig& cfg, Connector& connector,
                                                 const HypothesisOptions& options = {});

bool any_valid(const std::vector<HypothesisRound>& rounds);

/// Human-readable report with the SQL results next to the model's verdicts.
std::string render_hypothesis_report(const std::vector<HypothesisRound>& rounds);

}  // namespace pmllm
