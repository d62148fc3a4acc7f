#include "pmllm/visualization.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <set>
#include <cstdio>
#include <map>
#include <random>

#include "pmllm/abstraction.hpp"
#include "pmllm/error.hpp"
#include "pmllm/log_io.hpp"

extern char** environ;

namespace pmllm {
namespace {

constexpr const char* kStart = "@@start";
constexpr const char* kEnd = "@@end";

std::string xml_text(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string dot_header(std::string_view name) {
  return "digraph " + std::string(name) +
         " {\n"
         "  rankdir=LR;\n"
         "  node [shape=box, style=\"rounded,filled\", fillcolor=\"#f5f5f5\", fontname=\"Helvetica\"];\n"
         "  edge [fontname=\"Helvetica\"];\n";
}

std::string start_end_nodes(std::string_view suffix = {}, std::string_view label_suffix = {}) {
  const std::string s = dot_quote(std::string(kStart) + std::string(suffix));
  const std::string e = dot_quote(std::string(kEnd) + std::string(suffix));
  return "  " + s + " [shape=circle, style=filled, fillcolor=\"#2ca02c\", label=\"start" +
         std::string(label_suffix) + "\"];\n  " + e +
         " [shape=doublecircle, style=filled, fillcolor=\"#d62728\", label=\"end" +
         std::string(label_suffix) + "\"];\n";
}

std::vector<std::string> activity_nodes(const std::map<ActivityPair, std::int64_t>& edges,
                                        const std::map<std::string, std::int64_t>& starts,
                                        const std::map<std::string, std::int64_t>& ends) {
  std::set<std::string> acts;
  for (const auto& [e, _] : edges) {
    acts.insert(e.first);
    acts.insert(e.second);
  }
  for (const auto& [a, _] : starts) acts.insert(a);
  for (const auto& [a, _] : ends) acts.insert(a);
  return {acts.begin(), acts.end()};
}

std::string svg_open(int width, int height, std::string_view title) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n  <title>" +
         xml_text(title) + "</title>\n  <rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" fill=\"#ffffff\"/>\n";
}

std::string axes(double left, double top, double right, double bottom, std::string_view x_label,
                 std::string_view y_label) {
  return "  <g class=\"axes\" stroke=\"#333333\" stroke-width=\"1\">\n"
         "    <line x1=\"" + num(left) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(right) +
         "\" y2=\"" + num(bottom) + "\"/>\n"
         "    <line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) +
         "\" y2=\"" + num(bottom) + "\"/>\n  </g>\n"
         "  <text x=\"" + num((left + right) / 2) + "\" y=\"" + num(bottom + 35) +
         "\" font-family=\"Helvetica\" font-size=\"12\" text-anchor=\"middle\">" + xml_text(x_label) +
         "</text>\n  <text x=\"15\" y=\"" + num((top + bottom) / 2) +
         "\" font-family=\"Helvetica\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
         num((top + bottom) / 2) + ")\">" + xml_text(y_label) + "</text>\n";
}

std::string axis_tick(double x, double y, std::string_view text, std::string_view anchor) {
  return "  <text x=\"" + num(x) + "\" y=\"" + num(y) +
         "\" font-family=\"Helvetica\" font-size=\"10\" text-anchor=\"" + std::string(anchor) + "\">" +
         xml_text(text) + "</text>\n";
}

// Runs program -Tpng with stdin/stdout redirected to files.
void run_renderer(const std::string& program, const std::filesystem::path& input,
                  const std::filesystem::path& output) {
  if (program.empty()) throw Error(ErrorCode::RendererUnavailable, "no renderer program configured");
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, input.c_str(), O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, output.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  std::string flag = "-Tpng";
  std::string prog = program;
  char* argv[] = {prog.data(), flag.data(), nullptr};
  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, program.c_str(), &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0)
    throw Error(ErrorCode::RendererUnavailable, "cannot start renderer '" + program + "'", program);
  int status = 0;
  if (waitpid(pid, &status, 0) < 0 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw Error(ErrorCode::RendererUnavailable,
                "renderer '" + program + "' failed (exit status " +
                    std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + ")",
                program);
}

std::filesystem::path temp_file(std::string_view suffix) {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  return std::filesystem::temp_directory_path() /
         ("pmllm-" + std::to_string(::getpid()) + "-" + std::to_string(rng()) + std::string(suffix));
}

struct TempFile {
  std::filesystem::path path;
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

}  // namespace

std::string dot_quote(std::string_view id) {
  std::string out = "\"";
  for (char c : id) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

DotGraph dfg_to_dot(const Dfg& dfg) {
  std::string out = dot_header("dfg") + start_end_nodes();
  for (const auto& a : activity_nodes(dfg.edges, dfg.start_activities, dfg.end_activities))
    out += "  " + dot_quote(a) + ";\n";
  for (const auto& [a, n] : dfg.start_activities)
    out += "  " + dot_quote(kStart) + " -> " + dot_quote(a) + " [label=\"" + std::to_string(n) +
           "\", style=dashed];\n";
  for (const auto& [edge, n] : dfg.edges)
    out += "  " + dot_quote(edge.first) + " -> " + dot_quote(edge.second) + " [label=\"" +
           std::to_string(n) + "\"];\n";
  for (const auto& [a, n] : dfg.end_activities)
    out += "  " + dot_quote(a) + " -> " + dot_quote(kEnd) + " [label=\"" + std::to_string(n) +
           "\", style=dashed];\n";
  out += "}\n";
  return {std::move(out), DotKind::DfgFrequency};
}

DotGraph performance_dfg_to_dot(const PerformanceDfg& perf) {
  std::map<ActivityPair, std::int64_t> counts;
  for (const auto& [edge, p] : perf.edges) counts[edge] = p.count;
  std::string out = dot_header("performance_dfg") + start_end_nodes();
  for (const auto& a : activity_nodes(counts, {}, {})) out += "  " + dot_quote(a) + ";\n";
  for (const auto& [edge, p] : perf.edges)
    out += "  " + dot_quote(edge.first) + " -> " + dot_quote(edge.second) + " [label=\"" +
           format_seconds(p.mean_seconds) + "s\"];\n";
  out += "}\n";
  return {std::move(out), DotKind::DfgPerformance};
}

DotGraph petri_net_to_dot(const PetriNet& net) {
  std::string out = dot_header("petri_net");
  for (const auto& p : net.places) {
    auto it = net.initial_marking.find(p);
    const std::string tokens = it == net.initial_marking.end() ? "" : std::to_string(it->second);
    out += "  " + dot_quote(p) + " [shape=circle, style=solid, label=" + dot_quote(tokens) +
           ", xlabel=" + dot_quote(p);
    if (net.final_marking.contains(p)) out += ", peripheries=2";
    out += "];\n";
  }
  for (const auto& [id, label] : net.transitions) {
    if (label)
      out += "  " + dot_quote(id) + " [shape=box, style=solid, label=" + dot_quote(*label) + "];\n";
    else
      out += "  " + dot_quote(id) +
             " [shape=box, style=filled, fillcolor=black, width=0.2, label=\"\", xlabel=" +
             dot_quote("tau[" + id + "]") + "];\n";
  }
  for (const auto& [src, dst] : net.arcs) out += "  " + dot_quote(src) + " -> " + dot_quote(dst) + ";\n";
  out += "}\n";
  return {std::move(out), DotKind::PetriNet};
}

DotGraph ocdfg_to_dot(const OcDfg& ocdfg) {
  std::string out = dot_header("ocdfg");
  std::set<std::string> acts;
  for (const auto& [_, dfg] : ocdfg.per_type)
    for (const auto& a : activity_nodes(dfg.edges, dfg.start_activities, dfg.end_activities))
      acts.insert(a);
  for (const auto& a : acts) out += "  " + dot_quote(a) + ";\n";
  std::size_t color_index = 0;
  for (const auto& [type, dfg] : ocdfg.per_type) {
    const std::string color = kPalette[color_index++ % std::size(kPalette)];
    const std::string suffix = ":" + type;
    out += "  " + dot_quote(kStart + suffix) + " [shape=circle, style=filled, fillcolor=\"" + color +
           "\", label=" + dot_quote(type) + "];\n";
    out += "  " + dot_quote(kEnd + suffix) + " [shape=doublecircle, style=filled, fillcolor=\"" +
           color + "\", label=" + dot_quote(type) + "];\n";
    const std::string style = "color=\"" + color + "\", fontcolor=\"" + color + "\"";
    for (const auto& [a, n] : dfg.start_activities)
      out += "  " + dot_quote(kStart + suffix) + " -> " + dot_quote(a) + " [label=\"" +
             std::to_string(n) + "\", style=dashed, " + style + "];\n";
    for (const auto& [edge, n] : dfg.edges)
      out += "  " + dot_quote(edge.first) + " -> " + dot_quote(edge.second) + " [label=" +
             dot_quote(type + " " + std::to_string(n)) + ", " + style + "];\n";
    for (const auto& [a, n] : dfg.end_activities)
      out += "  " + dot_quote(a) + " -> " + dot_quote(kEnd + suffix) + " [label=\"" +
             std::to_string(n) + "\", style=dashed, " + style + "];\n";
  }
  out += "}\n";
  return {std::move(out), DotKind::OcDfg};
}

SvgDocument dotted_chart_svg(const EventLog& log) {
  if (log.empty()) throw Error(ErrorCode::EmptyLog, "dotted chart needs events");
  const auto spans = log.cases();
  std::vector<std::size_t> order(spans.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return log.timestamp(spans[a].begin) < log.timestamp(spans[b].begin);
  });

  std::map<std::string, std::string> colors;
  std::vector<std::string> legend;
  Timestamp lo = log.timestamp(0), hi = log.timestamp(0);
  for (std::size_t r = 0; r < log.num_events(); ++r) {
    lo = std::min(lo, log.timestamp(r));
    hi = std::max(hi, log.timestamp(r));
    if (!colors.contains(log.activity(r))) {
      colors[log.activity(r)] = kPalette[legend.size() % std::size(kPalette)];
      legend.push_back(log.activity(r));
    }
  }

  const double left = 80, top = 30, row_height = 20, plot_width = 600;
  const double bottom = top + row_height * static_cast<double>(spans.size());
  const int width = static_cast<int>(left + plot_width + 180);
  const int height = static_cast<int>(bottom + 60);
  const double span_us = static_cast<double>(hi.micros - lo.micros);
  auto x_of = [&](Timestamp t) {
    return span_us > 0 ? left + plot_width * static_cast<double>(t.micros - lo.micros) / span_us : left;
  };

  std::string out = svg_open(width, height, "Dotted chart");
  out += axes(left, top, left + plot_width, bottom, "time", "case");
  out += axis_tick(left, bottom + 15, format_timestamp(lo), "start");
  out += axis_tick(left + plot_width, bottom + 15, format_timestamp(hi), "end");
  out += "  <g class=\"dots\">\n";
  for (std::size_t row = 0; row < order.size(); ++row) {
    const auto& span = spans[order[row]];
    const double y = top + row_height * (static_cast<double>(row) + 0.5);
    out += axis_tick(left - 5, y + 3, span.case_id, "end");
    for (std::size_t r = span.begin; r < span.end; ++r)
      out += "    <circle class=\"dot\" cx=\"" + num(x_of(log.timestamp(r))) + "\" cy=\"" + num(y) +
             "\" r=\"4\" fill=\"" + colors[log.activity(r)] + "\"><title>" +
             xml_text(span.case_id + " " + log.activity(r) + " " + format_timestamp(log.timestamp(r))) +
             "</title></circle>\n";
  }
  out += "  </g>\n  <g class=\"legend\">\n";
  for (std::size_t i = 0; i < legend.size(); ++i) {
    const double y = top + 15 * static_cast<double>(i);
    out += "    <rect x=\"" + num(left + plot_width + 20) + "\" y=\"" + num(y) +
           "\" width=\"10\" height=\"10\" fill=\"" + colors[legend[i]] + "\"/>\n";
    out += "  " + axis_tick(left + plot_width + 35, y + 9, legend[i], "start");
  }
  out += "  </g>\n</svg>\n";
  return {std::move(out), SvgKind::DottedChart, width, height};
}

SvgDocument case_duration_graph_svg(const FeatureTable& features) {
  const std::string column =
      std::find(features.columns.begin(), features.columns.end(), "case_duration_seconds") !=
              features.columns.end()
          ? "case_duration_seconds"
          : "lifecycle_duration_seconds";
  if (features.rows.empty()) throw Error(ErrorCode::EmptyLog, "case duration graph needs cases");
  const auto values = features.column_values(column);
  std::vector<std::pair<double, std::string>> points;
  for (std::size_t i = 0; i < values.size(); ++i) points.emplace_back(values[i], features.row_ids[i]);
  std::stable_sort(points.begin(), points.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  const double left = 80, top = 30, plot_width = 600, plot_height = 300;
  const double bottom = top + plot_height;
  const int width = static_cast<int>(left + plot_width + 40);
  const int height = static_cast<int>(bottom + 60);
  const double max_v = std::max(points.back().first, 0.0);
  const std::size_t n = points.size();
  auto x_of = [&](std::size_t i) {
    return n > 1 ? left + plot_width * static_cast<double>(i) / static_cast<double>(n - 1)
                 : left + plot_width / 2;
  };
  auto y_of = [&](double v) { return max_v > 0 ? bottom - plot_height * v / max_v : bottom; };

  std::string out = svg_open(width, height, "Case duration graph");
  out += axes(left, top, left + plot_width, bottom, "cases sorted by duration", "duration (s)");
  out += axis_tick(left - 5, top + 4, format_seconds(max_v), "end");
  out += axis_tick(left - 5, bottom, "0.0", "end");
  std::string polyline;
  for (std::size_t i = 0; i < n; ++i) polyline += (i ? " " : "") + num(x_of(i)) + "," + num(y_of(points[i].first));
  out += "  <polyline fill=\"none\" stroke=\"" + std::string(kPalette[0]) + "\" stroke-width=\"1.5\" points=\"" +
         polyline + "\"/>\n  <g class=\"marks\">\n";
  for (std::size_t i = 0; i < n; ++i)
    out += "    <circle class=\"mark\" cx=\"" + num(x_of(i)) + "\" cy=\"" + num(y_of(points[i].first)) +
           "\" r=\"3\" fill=\"" + kPalette[0] + "\"><title>" +
           xml_text(points[i].second + ": " + format_seconds(points[i].first) + "s") + "</title></circle>\n";
  out += "  </g>\n</svg>\n";
  return {std::move(out), SvgKind::CaseDurationGraph, width, height};
}

std::vector<std::int64_t> events_per_time_histogram(const EventLog& log) {
  if (log.empty()) throw Error(ErrorCode::EmptyLog, "events per time graph needs events");
  Timestamp lo = log.timestamp(0), hi = log.timestamp(0);
  for (std::size_t r = 0; r < log.num_events(); ++r) {
    lo = std::min(lo, log.timestamp(r));
    hi = std::max(hi, log.timestamp(r));
  }
  constexpr std::int64_t kBins = 20;
  const std::int64_t span = hi.micros - lo.micros;
  std::vector<std::int64_t> bins(span == 0 ? 1 : kBins, 0);
  for (std::size_t r = 0; r < log.num_events(); ++r) {
    if (span == 0) {
      ++bins[0];
      continue;
    }
    const auto offset = static_cast<__int128>(log.timestamp(r).micros - lo.micros);
    auto idx = static_cast<std::int64_t>(offset * kBins / span);
    ++bins[static_cast<std::size_t>(std::min(idx, kBins - 1))];
  }
  return bins;
}

SvgDocument events_per_time_graph_svg(const EventLog& log) {
  const auto bins = events_per_time_histogram(log);
  Timestamp lo = log.timestamp(0), hi = log.timestamp(0);
  for (std::size_t r = 0; r < log.num_events(); ++r) {
    lo = std::min(lo, log.timestamp(r));
    hi = std::max(hi, log.timestamp(r));
  }
  const double left = 80, top = 30, plot_width = 600, plot_height = 300;
  const double bottom = top + plot_height;
  const int width = static_cast<int>(left + plot_width + 40);
  const int height = static_cast<int>(bottom + 60);
  const double max_count = static_cast<double>(*std::max_element(bins.begin(), bins.end()));
  const double bar_width = plot_width / static_cast<double>(bins.size());

  std::string out = svg_open(width, height, "Events per time graph");
  out += axes(left, top, left + plot_width, bottom, "time", "events");
  out += axis_tick(left, bottom + 15, format_timestamp(lo), "start");
  out += axis_tick(left + plot_width, bottom + 15, format_timestamp(hi), "end");
  out += axis_tick(left - 5, top + 4, std::to_string(static_cast<std::int64_t>(max_count)), "end");
  out += "  <g class=\"bars\">\n";
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const double h = max_count > 0 ? plot_height * static_cast<double>(bins[i]) / max_count : 0;
    out += "    <rect class=\"bar\" x=\"" + num(left + bar_width * static_cast<double>(i)) + "\" y=\"" +
           num(bottom - h) + "\" width=\"" + num(bar_width * 0.9) + "\" height=\"" + num(h) +
           "\" fill=\"" + kPalette[0] + "\"><title>bin " + std::to_string(i) + ": " +
           std::to_string(bins[i]) + " events</title></rect>\n";
  }
  out += "  </g>\n</svg>\n";
  return {std::move(out), SvgKind::EventsPerTimeGraph, width, height};
}

std::string rasterize(std::string_view document, const std::string& program) {
  if (program.empty()) throw Error(ErrorCode::RendererUnavailable, "no renderer program configured");
  TempFile in{temp_file(".in")};
  TempFile out{temp_file(".png")};
  write_text_file(in.path, document);
  run_renderer(program, in.path, out.path);
  return read_text_file(out.path);
}

std::filesystem::path save_visualization(const VisualDocument& doc, const std::filesystem::path& path,
                                         const std::string& renderer) {
  const std::string& text = std::visit([](const auto& d) -> const std::string& { return d.text; }, doc);
  if (path.extension() == ".png") {
    if (renderer.empty())
      throw Error(ErrorCode::RendererUnavailable, "PNG output needs a renderer program",
                  path.string());
    write_text_file(path, rasterize(text, renderer));
  } else {
    write_text_file(path, text);
  }
  return path;
}

}  // namespace pmllm
