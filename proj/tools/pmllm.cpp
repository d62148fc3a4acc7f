#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>

#include "CLI11.hpp"
#include "pmllm/abstraction.hpp"
#include "pmllm/config.hpp"
#include "pmllm/discovery.hpp"
#include "pmllm/error.hpp"
#include "pmllm/hypothesis.hpp"
#include "pmllm/llm.hpp"
#include "pmllm/log_io.hpp"
#include "pmllm/manual.hpp"
#include "pmllm/petri_net.hpp"
#include "pmllm/query.hpp"
#include "pmllm/visualization.hpp"

namespace fs = std::filesystem;
using namespace pmllm;

namespace {

constexpr int kUsage = 3;

struct CsvOptions {
  std::string case_col = "case_id";
  std::string activity_col = "activity";
  std::string timestamp_col = "timestamp";
  std::string timestamp_format = "ISO8601";
};

using Input = std::variant<EventLog, Ocel, PetriNet>;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failures while reading the input always map to exit 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string lower_ext(const fs::path& p) {
  auto ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

Input load_input(const fs::path& path, const CsvOptions& csv) {
  const auto ext = lower_ext(path);
  if (ext != ".csv" && ext != ".xes" && ext != ".json" && ext != ".pnml")
    throw UsageError("unsupported input extension '" + ext + "' (expected .csv, .xes, .json or .pnml)");
  try {
    if (ext == ".csv")
      return import_csv(path, {csv.case_col, csv.activity_col, csv.timestamp_col}, csv.timestamp_format);
    if (ext == ".xes") return import_xes(path);
    if (ext == ".json") return import_ocel_json(path);
    return import_pnml(path);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

const EventLog& need_log(const Input& in, std::string_view what) {
  if (auto* log = std::get_if<EventLog>(&in)) return *log;
  throw UsageError(std::string(what) + " needs an event log (.csv or .xes)");
}

const Ocel& need_ocel(const Input& in, std::string_view what) {
  if (auto* ocel = std::get_if<Ocel>(&in)) return *ocel;
  throw UsageError(std::string(what) + " needs an object-centric log (.json)");
}

const std::set<std::string> kAbstractionKinds{"dfg",          "variants",         "log_attributes", "log_features",
                                              "case",         "ocel",             "ocel_ocdfg",     "ocel_features",
                                              "event_stream", "temporal_profile", "petri_net",      "declare",
                                              "log_skeleton"};

const std::set<std::string> kVisualKinds{"dfg",          "performance_dfg", "petri_net",      "ocdfg",
                                         "dotted_chart", "case_duration",   "events_per_time"};

struct AbstractArgs {
  std::string case_id;
  std::size_t window = 10;
};

Abstraction build_abstraction(const Input& in, const std::string& kind, const Budget& budget, const AbstractArgs& args) {
  if (kind == "dfg") return abstract_dfg(compute_dfg(need_log(in, kind)), budget);
  if (kind == "variants") return abstract_variants(compute_variants(need_log(in, kind)), budget);
  if (kind == "log_attributes") return abstract_log_attributes(need_log(in, kind), budget);
  if (kind == "log_features") return abstract_log_features(extract_features(need_log(in, kind)), budget);
  if (kind == "case") {
    if (args.case_id.empty()) throw UsageError("kind 'case' needs --case");
    return abstract_case(get_case(need_log(in, kind), args.case_id), budget);
  }
  if (kind == "ocel") return abstract_ocel(need_ocel(in, kind), budget);
  if (kind == "ocel_ocdfg") return abstract_ocel_ocdfg(compute_ocdfg(need_ocel(in, kind)), budget);
  if (kind == "ocel_features") return abstract_ocel_features(extract_ocel_features(need_ocel(in, kind)), budget);
  if (kind == "event_stream") return abstract_event_stream(last_events_window(need_log(in, kind), args.window), budget);
  if (kind == "temporal_profile") return abstract_temporal_profile(compute_temporal_profile(need_log(in, kind)), budget);
  if (kind == "declare") return abstract_declare(discover_declare(need_log(in, kind)), budget);
  if (kind == "log_skeleton") return abstract_log_skeleton(discover_log_skeleton(need_log(in, kind)), budget);
  if (kind == "petri_net") {
    if (auto* net = std::get_if<PetriNet>(&in)) return abstract_petri_net(*net, budget);
    throw UsageError("kind 'petri_net' needs a .pnml input");
  }
  throw UsageError("unknown abstraction kind '" + kind + "'");
}

VisualDocument build_visual(const Input& in, const std::string& kind) {
  if (kind == "dfg") return dfg_to_dot(compute_dfg(need_log(in, kind)));
  if (kind == "performance_dfg") return performance_dfg_to_dot(compute_performance_dfg(need_log(in, kind)));
  if (kind == "dotted_chart") return dotted_chart_svg(need_log(in, kind));
  if (kind == "case_duration") return case_duration_graph_svg(extract_features(need_log(in, kind)));
  if (kind == "events_per_time") return events_per_time_graph_svg(need_log(in, kind));
  if (kind == "ocdfg") return ocdfg_to_dot(compute_ocdfg(need_ocel(in, kind)));
  if (kind == "petri_net") {
    if (auto* net = std::get_if<PetriNet>(&in)) return petri_net_to_dot(*net);
    throw UsageError("kind 'petri_net' needs a .pnml input");
  }
  throw UsageError("unknown visualization kind '" + kind + "'");
}

void emit(const std::string& payload, const std::string& out) {
  if (out.empty()) std::cout << payload << std::flush;
  else write_text_file(out, payload);
}

std::unique_ptr<Connector> make_connector(const std::string& transcript) {
  if (!transcript.empty()) return std::make_unique<MockConnector>(MockConnector::from_file(transcript));
  return std::make_unique<HttpConnector>();
}

std::string render_result(const QueryResult& r, const std::string& format) {
  return format == "csv" ? r.to_csv() : r.to_text_table();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Process mining artifacts as LLM prompts, SQL over event data and hypothesis checking."};
  app.require_subcommand(1);

  CsvOptions csv;
  std::string config_file, transcript, format = "text";
  Settings flags;
  std::string base_url, model, api_key_env, renderer;
  auto add_common = [&](CLI::App* sub, bool llm) {
    sub->add_option("--case-col", csv.case_col, "CSV column holding the case id");
    sub->add_option("--activity-col", csv.activity_col, "CSV column holding the activity");
    sub->add_option("--timestamp-col", csv.timestamp_col, "CSV column holding the timestamp");
    sub->add_option("--timestamp-format", csv.timestamp_format, "strftime-style format, or ISO8601");
    sub->add_option("--config", config_file, "key=value configuration file");
    if (llm) {
      sub->add_option("--base-url", base_url, "chat-completions base URL");
      sub->add_option("--model", model, "model name");
      sub->add_option("--api-key-env", api_key_env, "environment variable holding the API key");
      sub->add_option("--transcript", transcript, "answer from a transcript file instead of the network");
    }
  };

  // abstract
  auto* abstract = app.add_subcommand("abstract", "print a textual abstraction");
  std::string input, kind, out;
  std::optional<std::size_t> max_chars;
  bool no_header = false;
  AbstractArgs aargs;
  abstract->add_option("input", input, "log, OCEL or PNML file")->required();
  abstract->add_option("kind", kind, "abstraction kind")->required();
  abstract->add_option("--max-chars", max_chars, "length budget in characters");
  abstract->add_flag("--no-header", no_header, "omit the explanatory header");
  abstract->add_option("--case", aargs.case_id, "case id for kind 'case'");
  abstract->add_option("--window", aargs.window, "number of events for kind 'event_stream'");
  abstract->add_option("--out", out, "output file");
  add_common(abstract, false);

  // query
  auto* query = app.add_subcommand("query", "run SQL or build a text-to-SQL prompt");
  std::string sql, question, knowledge;
  bool dry_run = false, execute = false;
  query->add_option("input", input, "log or OCEL file")->required();
  auto* sql_opt = query->add_option("--sql", sql, "SELECT statement to run");
  auto* q_opt = query->add_option("--question", question, "natural-language question");
  sql_opt->excludes(q_opt);
  query->add_option("--knowledge", knowledge, "domain knowledge added to the prompt");
  auto* dry_flag = query->add_flag("--dry-run", dry_run, "print the prompt only (default)");
  query->add_flag("--execute", execute, "send the prompt, then run the returned SQL")->excludes(dry_flag);
  query->add_option("--format", format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
  add_common(query, true);

  // hypothesize
  auto* hyp = app.add_subcommand("hypothesize", "run the hypothesis loop");
  int max_rounds = 3;
  std::string focus;
  hyp->add_option("input", input, "log or OCEL file")->required();
  hyp->add_option("--max-rounds", max_rounds, "maximum number of rounds")->check(CLI::PositiveNumber);
  hyp->add_option("--focus", focus, "what the hypotheses should be about");
  hyp->add_option("--out", out, "report file");
  add_common(hyp, true);

  // explain-viz
  auto* viz = app.add_subcommand("explain-viz", "render a visualization and ask a vision model about it");
  std::string out_image;
  viz->add_option("input", input, "log, OCEL or PNML file")->required();
  viz->add_option("kind", kind, "visualization kind")->required();
  viz->add_option("--question", question, "question about the image")->required();
  viz->add_option("--out-image", out_image, "also save the visualization here (.dot, .svg or .png)");
  viz->add_option("--renderer", renderer, "program run as '<program> -Tpng'");
  add_common(viz, true);

  // manual
  auto* manual = app.add_subcommand("manual", "print the API manual");
  manual->add_option("--out", out, "output file");

  // convert
  auto* convert = app.add_subcommand("convert", "convert an event log between CSV and XES");
  std::string output;
  convert->add_option("input", input, "source .csv or .xes")->required();
  convert->add_option("output", output, "target .csv or .xes")->required();
  add_common(convert, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    const auto env = settings_from_environment();
    const auto file = config_file.empty() ? Settings{} : load_config_file(config_file);
    if (!base_url.empty()) flags["base_url"] = base_url;
    if (!model.empty()) flags["model"] = model;
    if (!api_key_env.empty()) flags["api_key_env"] = api_key_env;
    if (!renderer.empty()) flags["renderer"] = renderer;
    if (max_chars) flags["max_chars"] = std::to_string(*max_chars);
    const CliConfig cfg = resolve_config(flags, file, env);

    if (*abstract) {
      if (!kAbstractionKinds.contains(kind)) throw UsageError("unknown abstraction kind '" + kind + "'");
      const auto in = load_input(input, csv);
      emit(build_abstraction(in, kind, {cfg.max_chars, !no_header}, aargs).text, out);
      return 0;
    }

    if (*query) {
      if (sql.empty() && question.empty()) throw UsageError("query needs --sql or --question");
      const auto in = load_input(input, csv);
      if (std::holds_alternative<PetriNet>(in)) throw UsageError("query needs an event log or OCEL");
      auto session = std::visit(
          [](const auto& src) -> SqlSession {
            if constexpr (std::is_same_v<std::decay_t<decltype(src)>, PetriNet>) throw UsageError("unreachable");
            else return SqlSession(src);
          },
          in);
      if (!sql.empty()) {
        std::cout << render_result(session.execute(sql), format);
        return 0;
      }
      const auto prompt = build_nl2sql_prompt(session.schema(), question,
                                              knowledge.empty() ? std::nullopt : std::optional<std::string_view>(knowledge));
      if (!execute) {
        std::cout << prompt;
        return 0;
      }
      auto connector = make_connector(transcript);
      const auto reply = chat_complete(cfg.llm, {ChatMessage::user(prompt)}, *connector);
      const auto generated = parse_sql_from_response(reply);
      std::cerr << "SQL: " << generated << "\n";
      std::cout << render_result(session.execute(generated), format);
      return 0;
    }

    if (*hyp) {
      const auto in = load_input(input, csv);
      auto connector = make_connector(transcript);
      HypothesisOptions options;
      options.max_rounds = max_rounds;
      if (!focus.empty()) options.focus = focus;
      options.budget.max_chars = cfg.max_chars;
      std::vector<HypothesisRound> rounds;
      if (auto* log = std::get_if<EventLog>(&in)) rounds = run_hypothesis_loop(*log, cfg.llm, *connector, options);
      else rounds = run_hypothesis_loop(need_ocel(in, "hypothesize"), cfg.llm, *connector, options);
      emit(render_hypothesis_report(rounds), out);
      return any_valid(rounds) ? 0 : 1;
    }

    if (*viz) {
      if (!kVisualKinds.contains(kind)) throw UsageError("unknown visualization kind '" + kind + "'");
      const auto in = load_input(input, csv);
      const auto doc = build_visual(in, kind);
      fs::path image;
      struct Cleanup {
        fs::path path;
        ~Cleanup() {
          std::error_code ec;
          if (!path.empty()) fs::remove(path, ec);
        }
      } cleanup;
      if (!out_image.empty()) image = save_visualization(doc, out_image, cfg.renderer);
      if (image.empty() || lower_ext(image) != ".png") {
        const bool dot = std::holds_alternative<DotGraph>(doc);
        image = fs::temp_directory_path() / ("pmllm-viz-" + std::to_string(::getpid()) + (dot ? ".dot" : ".svg"));
        save_visualization(doc, image);
        cleanup.path = image;
      }
      auto connector = make_connector(transcript);
      std::cout << explain_visualization(image, question, cfg.llm, *connector, cfg.renderer) << "\n";
      return 0;
    }

    if (*manual) {
      emit(export_api_manual(), out);
      return 0;
    }

    if (*convert) {
      const auto in_ext = lower_ext(input), out_ext = lower_ext(output);
      if ((in_ext != ".csv" && in_ext != ".xes") || (out_ext != ".csv" && out_ext != ".xes"))
        throw UsageError("convert supports .csv and .xes only");
      const auto in = load_input(input, csv);
      const auto& log = need_log(in, "convert");
      if (out_ext == ".csv") export_csv(log, output);
      else export_xes(log, output);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
