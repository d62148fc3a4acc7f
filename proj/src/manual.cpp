#include "pmllm/manual.hpp"

#include <algorithm>
#include <tuple>

namespace pmllm {
namespace {

// clang-format off
const ManualEntry kEntries[] = {
  {"event-log-core", "import_csv", "EventLog import_csv(path, RoleMap mapping = {}, string_view timestamp_format = \"ISO8601\")",
   "Reads a CSV event log; role columns are renamed to case_id, activity and timestamp.",
   "auto log = import_csv(\"log.csv\", {\"CaseID\", \"Activity\", \"Time\"}, \"%Y-%m-%d %H:%M:%S\");"},
  {"event-log-core", "parse_csv_log", "EventLog parse_csv_log(string_view text, RoleMap mapping = {}, string_view timestamp_format = \"ISO8601\")",
   "CSV parsing from memory.", "auto log = parse_csv_log(\"case_id,activity,timestamp\\nc1,A,2024-01-01T00:00:00\\n\");"},
  {"event-log-core", "export_csv", "void export_csv(const EventLog&, path)", "Writes a log as RFC-4180 CSV.", "export_csv(log, \"out.csv\");"},
  {"event-log-core", "to_csv", "string to_csv(const EventLog&)", "CSV text of a log.", "std::string text = to_csv(log);"},
  {"event-log-core", "import_xes", "EventLog import_xes(path)", "Reads an XES event log.", "auto log = import_xes(\"log.xes\");"},
  {"event-log-core", "parse_xes", "EventLog parse_xes(string_view text)", "XES parsing from memory.", "auto log = parse_xes(xml);"},
  {"event-log-core", "export_xes", "void export_xes(const EventLog&, path)", "Writes a log as XES.", "export_xes(log, \"out.xes\");"},
  {"event-log-core", "to_xes", "string to_xes(const EventLog&)", "XES text of a log.", "std::string xml = to_xes(log);"},
  {"event-log-core", "import_ocel_json", "Ocel import_ocel_json(path)", "Reads an object-centric log in OCEL 2.0 JSON.", "auto ocel = import_ocel_json(\"ocel.json\");"},
  {"event-log-core", "parse_ocel_json", "Ocel parse_ocel_json(string_view text)", "OCEL JSON parsing from memory.", "auto ocel = parse_ocel_json(json_text);"},
  {"event-log-core", "import_pnml", "PetriNet import_pnml(path)", "Reads a Petri net with markings from PNML.", "auto net = import_pnml(\"net.pnml\");"},
  {"event-log-core", "parse_pnml", "PetriNet parse_pnml(string_view text)", "PNML parsing from memory.", "auto net = parse_pnml(xml);"},
  {"event-log-core", "get_case", "Case get_case(const EventLog&, string_view case_id)", "Events of one case in time order.", "auto c = get_case(log, \"c1\");"},
  {"event-log-core", "last_events_window", "EventStreamWindow last_events_window(const EventLog&, size_t n)",
   "The last n events of the log across all cases, oldest first.", "auto window = last_events_window(log, 5);"},
  {"artifact-discovery", "compute_dfg", "Dfg compute_dfg(const EventLog&)", "Directly-follows graph with start and end activities.", "auto dfg = compute_dfg(log);"},
  {"artifact-discovery", "compute_performance_dfg", "PerformanceDfg compute_performance_dfg(const EventLog&)",
   "Mean, median, min and max seconds per directly-follows edge.", "auto perf = compute_performance_dfg(log);"},
  {"artifact-discovery", "compute_variants", "VariantTable compute_variants(const EventLog&)", "Cases grouped by activity sequence.", "auto variants = compute_variants(log);"},
  {"artifact-discovery", "compute_temporal_profile", "TemporalProfile compute_temporal_profile(const EventLog&)",
   "Mean and standard deviation of the time between eventually-following activity pairs.", "auto profile = compute_temporal_profile(log);"},
  {"artifact-discovery", "discover_log_skeleton", "LogSkeleton discover_log_skeleton(const EventLog&)",
   "Equivalence, always-before, always-after, never-together, directly-follows and frequency bounds.", "auto skeleton = discover_log_skeleton(log);"},
  {"artifact-discovery", "discover_declare", "DeclareModel discover_declare(const EventLog&)",
   "DECLARE constraints satisfied by every case.", "auto model = discover_declare(log);"},
  {"artifact-discovery", "extract_features", "FeatureTable extract_features(const EventLog&)",
   "Per-case numeric features: event count, duration, activity counts.", "auto features = extract_features(log);"},
  {"artifact-discovery", "compute_ocdfg", "OcDfg compute_ocdfg(const Ocel&)", "Directly-follows graph per object type.", "auto ocdfg = compute_ocdfg(ocel);"},
  {"artifact-discovery", "extract_ocel_features", "FeatureTable extract_ocel_features(const Ocel&)",
   "Per-object numeric features: event count, lifecycle duration, activity counts.", "auto features = extract_ocel_features(ocel);"},
  {"textual-abstraction", "abstract_dfg", "Abstraction abstract_dfg(const Dfg&, Budget = {})", "Edges as \"a -> b : n\", most frequent first.", "std::cout << abstract_dfg(compute_dfg(log)).text;"},
  {"textual-abstraction", "abstract_variants", "Abstraction abstract_variants(const VariantTable&, Budget = {})", "Variants with case counts, most frequent first.", "abstract_variants(compute_variants(log), {2000});"},
  {"textual-abstraction", "abstract_log_attributes", "Abstraction abstract_log_attributes(const EventLog&, Budget = {})", "Columns with type, role and value profile.", "abstract_log_attributes(log);"},
  {"textual-abstraction", "abstract_log_features", "Abstraction abstract_log_features(const FeatureTable&, Budget = {})", "Quantiles of each case feature.", "abstract_log_features(extract_features(log));"},
  {"textual-abstraction", "abstract_case", "Abstraction abstract_case(const Case&, Budget = {})", "Events of one case with relative times.", "abstract_case(get_case(log, \"c1\"));"},
  {"textual-abstraction", "abstract_ocel", "Abstraction abstract_ocel(const Ocel&, Budget = {})", "Objects, then events with their related objects.", "abstract_ocel(ocel);"},
  {"textual-abstraction", "abstract_ocel_ocdfg", "Abstraction abstract_ocel_ocdfg(const OcDfg&, Budget = {})", "Per-type directly-follows edges.", "abstract_ocel_ocdfg(compute_ocdfg(ocel));"},
  {"textual-abstraction", "abstract_ocel_features", "Abstraction abstract_ocel_features(const FeatureTable&, Budget = {})", "Quantiles of each object feature.", "abstract_ocel_features(extract_ocel_features(ocel));"},
  {"textual-abstraction", "abstract_event_stream", "Abstraction abstract_event_stream(const EventStreamWindow&, Budget = {})", "The most recent events, oldest first.", "abstract_event_stream(last_events_window(log, 10));"},
  {"textual-abstraction", "abstract_temporal_profile", "Abstraction abstract_temporal_profile(const TemporalProfile&, Budget = {})", "Pair timings, most observed first.", "abstract_temporal_profile(compute_temporal_profile(log));"},
  {"textual-abstraction", "abstract_petri_net", "Abstraction abstract_petri_net(const PetriNet&, Budget = {})", "Places, transitions, arcs and markings.", "abstract_petri_net(import_pnml(\"net.pnml\"));"},
  {"textual-abstraction", "abstract_declare", "Abstraction abstract_declare(const DeclareModel&, Budget = {})", "Constraints with template glosses.", "abstract_declare(discover_declare(log));"},
  {"textual-abstraction", "abstract_log_skeleton", "Abstraction abstract_log_skeleton(const LogSkeleton&, Budget = {})", "Relations of the six skeleton families.", "abstract_log_skeleton(discover_log_skeleton(log));"},
  {"visual-abstraction", "dfg_to_dot", "DotGraph dfg_to_dot(const Dfg&)", "Frequency DFG as DOT.", "save_visualization(dfg_to_dot(compute_dfg(log)), \"dfg.dot\");"},
  {"visual-abstraction", "performance_dfg_to_dot", "DotGraph performance_dfg_to_dot(const PerformanceDfg&)", "Performance DFG as DOT, edges labelled with mean seconds.", "performance_dfg_to_dot(compute_performance_dfg(log));"},
  {"visual-abstraction", "petri_net_to_dot", "DotGraph petri_net_to_dot(const PetriNet&)", "Petri net as DOT with markings.", "petri_net_to_dot(net);"},
  {"visual-abstraction", "ocdfg_to_dot", "DotGraph ocdfg_to_dot(const OcDfg&)", "Object-centric DFG as DOT, one colour per object type.", "ocdfg_to_dot(compute_ocdfg(ocel));"},
  {"visual-abstraction", "dotted_chart_svg", "SvgDocument dotted_chart_svg(const EventLog&)", "One dot per event; x is time, y is the case.", "dotted_chart_svg(log);"},
  {"visual-abstraction", "case_duration_graph_svg", "SvgDocument case_duration_graph_svg(const FeatureTable&)", "Sorted case durations.", "case_duration_graph_svg(extract_features(log));"},
  {"visual-abstraction", "events_per_time_graph_svg", "SvgDocument events_per_time_graph_svg(const EventLog&)", "Histogram of events over time.", "events_per_time_graph_svg(log);"},
  {"visual-abstraction", "save_visualization", "path save_visualization(const VisualDocument&, path, string renderer = {})",
   "Writes DOT or SVG text, or a PNG through the renderer program.", "save_visualization(dfg_to_dot(dfg), \"dfg.png\", \"dot\");"},
  {"query-engine", "describe_schema", "SchemaDescription describe_schema(const EventLog& | const Ocel&)", "Tables, columns, roles, join keys and SQL dialect.", "std::cout << describe_schema(log).render();"},
  {"query-engine", "execute_sql", "QueryResult execute_sql(const EventLog& | const Ocel&, string_view sql)",
   "Runs one read-only SELECT over the in-memory tables.", "execute_sql(log, \"SELECT COUNT(DISTINCT case_id) FROM event_log\");"},
  {"query-engine", "build_nl2sql_prompt", "string build_nl2sql_prompt(const SchemaDescription&, string_view question, optional<string_view> domain_knowledge)",
   "Prompt asking a model to translate a question into SQL.", "build_nl2sql_prompt(describe_schema(log), \"How many cases are there?\");"},
  {"query-engine", "parse_sql_from_response", "string parse_sql_from_response(string_view response)", "Extracts the SQL statement from a model reply.", "parse_sql_from_response(\"```sql\\nSELECT 1\\n```\");"},
  {"query-engine", "SqlSession", "SqlSession(const EventLog& | const Ocel&); QueryResult execute(string_view sql, milliseconds timeout)",
   "Reusable read-only session for many queries.", "SqlSession s(log); auto r = s.execute(\"SELECT * FROM event_log\");"},
  {"llm-bridge", "chat_complete", "string chat_complete(const LLMConfig&, const vector<ChatMessage>&, Connector&)",
   "Sends messages to a chat-completions endpoint and returns the reply text.", "HttpConnector http; chat_complete(cfg, {ChatMessage::user(\"Hello\")}, http);"},
  {"llm-bridge", "explain_visualization", "string explain_visualization(path doc, string_view question, const LLMConfig&, Connector&, string renderer = {})",
   "Asks a vision model about a PNG, or an SVG/DOT document rasterized first.", "explain_visualization(\"dfg.png\", \"Can you explain the process?\", cfg, http);"},
  {"llm-bridge", "direct_insight_query", "string direct_insight_query(const Abstraction&, string_view question, const LLMConfig&, Connector&)",
   "Asks a question about an abstraction.", "direct_insight_query(abstract_dfg(dfg), \"What are the anomalies?\", cfg, http);"},
  {"llm-bridge", "generate_hypotheses", "HypothesisRound generate_hypotheses(const vector<Abstraction>&, const SchemaDescription&, optional<string> focus, const LLMConfig&, Connector&)",
   "Asks the model for hypotheses, each with a checking SQL statement.", "generate_hypotheses({abstract_dfg(dfg)}, describe_schema(log), std::nullopt, cfg, http);"},
  {"llm-bridge", "run_hypothesis_loop", "vector<HypothesisRound> run_hypothesis_loop(const EventLog& | const Ocel&, const LLMConfig&, Connector&, HypothesisOptions = {})",
   "Generates, executes, judges and refines hypotheses until one is valid.", "auto rounds = run_hypothesis_loop(log, cfg, http, {.max_rounds = 3});"},
  {"llm-bridge", "export_api_manual", "string export_api_manual()", "This manual.", "write_text_file(\"manual.txt\", export_api_manual());"},
  {"cli", "abstract", "pmllm abstract <input> <kind> [--max-chars N] [--no-header] [--case ID] [--window N] [--out FILE]",
   "Prints one of the 13 textual abstractions of a log, OCEL or Petri net.", "pmllm abstract log.csv dfg"},
  {"cli", "query", "pmllm query <input> (--sql SQL | --question TEXT [--knowledge TEXT] [--dry-run | --execute]) [--format csv|text]",
   "Runs SQL, or builds the text-to-SQL prompt and optionally sends it.", "pmllm query log.csv --sql \"SELECT COUNT(DISTINCT case_id) FROM event_log\""},
  {"cli", "hypothesize", "pmllm hypothesize <input> [--max-rounds N] [--focus TEXT] [--transcript FILE]",
   "Runs the hypothesis loop; exit 1 when nothing was validated.", "pmllm hypothesize log.csv --transcript replies.txt"},
  {"cli", "explain-viz", "pmllm explain-viz <input> <kind> --question TEXT [--out-image FILE] [--renderer PROG]",
   "Renders a visualization and asks a vision model about it.", "pmllm explain-viz log.csv dfg --question \"Can you explain the process?\" --renderer dot"},
  {"cli", "manual", "pmllm manual [--out FILE]", "Writes this manual.", "pmllm manual --out manual.txt"},
  {"cli", "convert", "pmllm convert <input> <output>", "Converts between CSV and XES by file extension.", "pmllm convert log.csv log.xes"},
};
// clang-format on

}  // namespace

std::vector<ManualEntry> api_entries() {
  std::vector<ManualEntry> out(std::begin(kEntries), std::end(kEntries));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return std::tie(a.module, a.name) < std::tie(b.module, b.name); });
  return out;
}

std::string export_api_manual() {
  std::string out = "pmllm API manual\n";
  std::string module;
  for (const auto& e : api_entries()) {
    if (e.module != module) {
      module = e.module;
      out += "\n== " + module + " ==\n";
    }
    out += "\n" + e.name + "\n";
    out += "  signature: " + e.signature + "\n";
    out += "  " + e.description + "\n";
    out += "  example: " + e.example + "\n";
  }
  return out;
}

}  // namespace pmllm
