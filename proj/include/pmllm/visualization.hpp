#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pmllm/discovery.hpp"
#include "pmllm/event_log.hpp"
#include "pmllm/petri_net.hpp"

namespace pmllm {

enum class DotKind { DfgFrequency, DfgPerformance, PetriNet, OcDfg };
enum class SvgKind { DottedChart, CaseDurationGraph, EventsPerTimeGraph };

struct DotGraph {
  std::string text;
  DotKind kind;
};

struct SvgDocument {
  std::string text;
  SvgKind kind;
  int width = 0;
  int height = 0;
};

using VisualDocument = std::variant<DotGraph, SvgDocument>;

/// Fixed 10-colour palette, assigned in first-appearance order.
inline constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

/// Quoted DOT identifier with `"` and `\` escaped and newlines as `\n`.
std::string dot_quote(std::string_view id);

DotGraph dfg_to_dot(const Dfg& dfg);
DotGraph performance_dfg_to_dot(const PerformanceDfg& perf);
DotGraph petri_net_to_dot(const PetriNet& net);
DotGraph ocdfg_to_dot(const OcDfg& ocdfg);

/// x = time, y = one row per case ordered by first event, one dot per event
/// coloured by activity.
SvgDocument dotted_chart_svg(const EventLog& log);

/// Case (or object) durations sorted ascending, one mark each. Reads the
/// `case_duration_seconds` column, or `lifecycle_duration_seconds`.
SvgDocument case_duration_graph_svg(const FeatureTable& features);

/// Event counts in 20 equal-width time bins, or one bin for a zero time span.
std::vector<std::int64_t> events_per_time_histogram(const EventLog& log);
SvgDocument events_per_time_graph_svg(const EventLog& log);

/// Runs `<program> -Tpng` with the document on stdin and returns its stdout.
/// Throws RendererUnavailable when the program cannot be started or fails.
std::string rasterize(std::string_view document, const std::string& program);

/// Writes the document to `path`. A `.png` target is produced through the
/// renderer program, which is then required.
std::filesystem::path save_visualization(const VisualDocument& doc, const std::filesystem::path& path,
                                         const std::string& renderer = {});

}  // namespace pmllm
