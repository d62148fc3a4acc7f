#include "pmllm/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "pmllm/prompt_templates.hpp"

namespace pmllm {
namespace {

const PromptTemplates& templates() { return PromptTemplates::builtin(); }

std::string format_count(double v) { return std::to_string(std::llround(v)); }

std::string format_feature(const std::string& column, double v) {
  return column.ends_with("_seconds") ? format_seconds(v) : format_count(v);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> quantile_entries(const FeatureTable& features) {
  static constexpr double kQuantiles[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  static constexpr const char* kLabels[] = {"q0", "q0.25", "q0.5", "q0.75", "q1"};
  std::vector<std::string> names = features.columns;
  std::sort(names.begin(), names.end());
  std::vector<std::string> entries;
  if (features.rows.empty()) return entries;
  for (const auto& name : names) {
    const auto values = features.column_values(name);
    std::string line = name + " :";
    for (std::size_t i = 0; i < std::size(kQuantiles); ++i) {
      line += i ? ", " : " ";
      line += std::string(kLabels[i]) + " " + format_feature(name, lower_quantile(values, kQuantiles[i]));
    }
    entries.push_back(std::move(line));
  }
  return entries;
}

std::string render_attributes(const std::vector<std::pair<std::string, Value>>& attrs) {
  std::vector<std::string> parts;
  for (const auto& [k, v] : attrs) parts.push_back(k + "=" + to_text(v));
  return parts.empty() ? std::string{} : " [" + join(parts, ", ") + "]";
}

std::string marking_text(const Marking& m) {
  if (m.empty()) return "(empty)";
  std::vector<std::string> parts;
  for (const auto& [place, tokens] : m) parts.push_back(place + ":" + std::to_string(tokens));
  return join(parts, ", ");
}

}  // namespace

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

Abstraction assemble_abstraction(std::string_view header, const std::vector<std::string>& entries,
                                 const Budget& budget) {
  Abstraction a;
  a.entries_total = entries.size();
  std::size_t length = 0;
  if (budget.include_header && !header.empty()) {
    a.text = header;
    if (!a.text.ends_with('\n')) a.text += '\n';
    length = utf8_length(a.text);
    a.last_segment_chars = length;
  }
  for (const auto& entry : entries) {
    if (length >= budget.max_chars) break;
    std::string line = entry;
    if (!line.ends_with('\n')) line += '\n';
    const auto n = utf8_length(line);
    a.text += line;
    length += n;
    a.last_segment_chars = n;
    ++a.entries_included;
  }
  a.truncated = a.entries_included < a.entries_total;
  return a;
}

double lower_quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(values.size() - 1)));
  return values[std::min(idx, values.size() - 1)];
}

std::string render_dfg_entry(const ActivityPair& edge, std::int64_t frequency) {
  return edge.first + " -> " + edge.second + " : " + std::to_string(frequency);
}

std::string transition_name(const PetriNet& net, const std::string& transition_id) {
  auto it = net.transitions.find(transition_id);
  if (it == net.transitions.end() || !it->second) return "tau[" + transition_id + "]";
  return *it->second;
}

Abstraction abstract_dfg(const Dfg& dfg, const Budget& budget) {
  std::vector<std::pair<ActivityPair, std::int64_t>> edges(dfg.edges.begin(), dfg.edges.end());
  std::stable_sort(edges.begin(), edges.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<std::string> entries;
  for (const auto& [edge, freq] : edges) entries.push_back(render_dfg_entry(edge, freq));
  return assemble_abstraction(templates().get("abstraction.dfg.header"), entries, budget);
}

Abstraction abstract_variants(const VariantTable& variants, const Budget& budget) {
  std::vector<std::pair<const std::vector<std::string>*, std::int64_t>> rows;
  for (const auto& [seq, v] : variants.variants) rows.emplace_back(&seq, v.count);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<std::string> entries;
  for (const auto& [seq, count] : rows)
    entries.push_back(join(*seq, ",") + " : " + std::to_string(count) +
                      (count == 1 ? " case" : " cases"));
  return assemble_abstraction(templates().get("abstraction.variants.header"), entries, budget);
}

Abstraction abstract_log_attributes(const EventLog& log, const Budget& budget) {
  const auto& roles = log.roles();
  std::vector<std::string> entries;
  for (const auto& col : log.columns()) {
    std::string line = col.name + " (" + std::string(to_string(col.type));
    if (col.name == roles.case_id) line += ", role: case identifier";
    else if (col.name == roles.activity) line += ", role: activity";
    else if (col.name == roles.timestamp) line += ", role: timestamp";
    line += ")";

    std::map<std::string, std::int64_t> freq;
    std::size_t nulls = 0;
    std::optional<Value> lo, hi;
    for (const auto& v : col.values) {
      if (is_null(v)) {
        ++nulls;
        continue;
      }
      ++freq[to_text(v)];
      if (!lo || v < *lo) lo = v;
      if (!hi || *hi < v) hi = v;
    }
    line += " : " + std::to_string(freq.size()) + " distinct values";
    if (nulls) line += ", " + std::to_string(nulls) + " null";
    const bool ordered = col.type == ColumnType::Integer || col.type == ColumnType::Float ||
                         col.type == ColumnType::Timestamp;
    if (ordered && lo) {
      line += "; min " + to_text(*lo) + ", max " + to_text(*hi);
    } else if (!freq.empty()) {
      std::vector<std::pair<std::string, std::int64_t>> top(freq.begin(), freq.end());
      std::stable_sort(top.begin(), top.end(),
                       [](const auto& x, const auto& y) { return x.second > y.second; });
      if (top.size() > 10) top.resize(10);
      std::vector<std::string> parts;
      for (const auto& [value, n] : top) parts.push_back(value + " (" + std::to_string(n) + ")");
      line += "; most frequent: " + join(parts, ", ");
    }
    entries.push_back(std::move(line));
  }
  return assemble_abstraction(templates().get("abstraction.log_attributes.header"), entries, budget);
}

Abstraction abstract_log_features(const FeatureTable& features, const Budget& budget) {
  return assemble_abstraction(templates().get("abstraction.log_features.header"),
                              quantile_entries(features), budget);
}

Abstraction abstract_case(const Case& c, const Budget& budget) {
  std::vector<std::string> entries;
  for (std::size_t i = 0; i < c.events.size(); ++i) {
    const auto& e = c.events[i];
    entries.push_back(std::to_string(i + 1) + ". " + e.activity + " @ " +
                      format_timestamp(e.timestamp) + " (+" +
                      format_seconds(e.timestamp.seconds_since(c.events.front().timestamp)) + "s)" +
                      render_attributes(e.attributes));
  }
  return assemble_abstraction(
      templates().render("abstraction.case.header", {{"case_id", c.case_id}}), entries, budget);
}

Abstraction abstract_ocel(const Ocel& ocel, const Budget& budget) {
  std::vector<const OcelObject*> objects;
  for (const auto& o : ocel.objects()) objects.push_back(&o);
  std::sort(objects.begin(), objects.end(),
            [](const OcelObject* x, const OcelObject* y) { return x->id < y->id; });
  std::vector<std::string> entries;
  for (const auto* o : objects) entries.push_back("object " + o->id + " (" + o->type + ")");
  for (const auto& e : ocel.events()) {
    std::vector<std::string> related;
    for (const auto* o : ocel.objects_of(e.id)) related.push_back(o->id + "(" + o->type + ")");
    std::vector<std::pair<std::string, Value>> attrs(e.attributes.begin(), e.attributes.end());
    entries.push_back("event " + e.id + " " + e.activity + " @ " + format_timestamp(e.time) +
                      " objects: " + join(related, ", ") + render_attributes(attrs));
  }
  return assemble_abstraction(templates().get("abstraction.ocel.header"), entries, budget);
}

Abstraction abstract_ocel_ocdfg(const OcDfg& ocdfg, const Budget& budget) {
  std::vector<std::pair<std::string, std::int64_t>> types;
  for (const auto& [type, dfg] : ocdfg.per_type) {
    std::int64_t total = 0;
    for (const auto& [_, f] : dfg.edges) total += f;
    types.emplace_back(type, total);
  }
  std::stable_sort(types.begin(), types.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<std::string> entries;
  for (const auto& [type, _] : types) {
    const auto& dfg = ocdfg.per_type.at(type);
    std::vector<std::pair<ActivityPair, std::int64_t>> edges(dfg.edges.begin(), dfg.edges.end());
    std::stable_sort(edges.begin(), edges.end(),
                     [](const auto& x, const auto& y) { return x.second > y.second; });
    for (const auto& [edge, freq] : edges) entries.push_back(type + ": " + render_dfg_entry(edge, freq));
  }
  return assemble_abstraction(templates().get("abstraction.ocel_ocdfg.header"), entries, budget);
}

Abstraction abstract_ocel_features(const FeatureTable& features, const Budget& budget) {
  return assemble_abstraction(templates().get("abstraction.ocel_features.header"),
                              quantile_entries(features), budget);
}

Abstraction abstract_event_stream(const EventStreamWindow& window, const Budget& budget) {
  std::vector<std::string> entries;
  for (const auto& e : window.events)
    entries.push_back(format_timestamp(e.timestamp) + " | case " + e.case_id + " | " + e.activity);
  return assemble_abstraction(templates().get("abstraction.event_stream.header"), entries, budget);
}

Abstraction abstract_temporal_profile(const TemporalProfile& profile, const Budget& budget) {
  std::vector<std::pair<ActivityPair, PairTiming>> pairs(profile.pairs.begin(), profile.pairs.end());
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
    return x.second.observation_count > y.second.observation_count;
  });
  std::vector<std::string> entries;
  for (const auto& [pair, t] : pairs)
    entries.push_back(pair.first + " -> " + pair.second + " : mean " + format_seconds(t.mean_seconds) +
                      "s, stdev " + format_seconds(t.stdev_seconds) + "s (" +
                      std::to_string(t.observation_count) + " obs)");
  return assemble_abstraction(templates().get("abstraction.temporal_profile.header"), entries, budget);
}

Abstraction abstract_petri_net(const PetriNet& net, const Budget& budget) {
  std::vector<std::string> entries;
  for (const auto& p : net.places) entries.push_back("place " + p);
  for (const auto& [id, _] : net.transitions) entries.push_back("transition " + transition_name(net, id));
  auto node_name = [&](const std::string& id) { return net.is_place(id) ? id : transition_name(net, id); };
  std::set<std::pair<std::string, std::string>> arcs;
  for (const auto& [src, dst] : net.arcs) arcs.emplace(node_name(src), node_name(dst));
  for (const auto& [src, dst] : arcs) entries.push_back("arc " + src + " -> " + dst);
  entries.push_back("initial: " + marking_text(net.initial_marking));
  entries.push_back("final: " + marking_text(net.final_marking));
  return assemble_abstraction(templates().get("abstraction.petri_net.header"), entries, budget);
}

Abstraction abstract_declare(const DeclareModel& model, const Budget& budget) {
  std::string header;
  std::vector<std::string> entries;
  if (model.size() == 0) {
    header = templates().get("abstraction.declare.empty");
  } else {
    header = templates().get("abstraction.declare.header");
    for (const auto& [name, constraints] : model.constraints) {
      if (constraints.empty()) continue;
      header += "\n- " + templates().get("declare.gloss." + name);
      for (const auto& c : constraints) entries.push_back(name + "(" + join(c.activities, ",") + ")");
    }
  }
  return assemble_abstraction(header, entries, budget);
}

Abstraction abstract_log_skeleton(const LogSkeleton& skeleton, const Budget& budget) {
  std::string header = templates().get("abstraction.log_skeleton.header");
  for (const char* family : {"equivalence", "always_before", "always_after", "never_together",
                             "directly_follows", "activity_frequencies"})
    header += "\n- " + templates().get(std::string("skeleton.gloss.") + family);

  std::vector<std::string> entries;
  auto add = [&](const char* family, const std::set<ActivityPair>& pairs, const char* op) {
    for (const auto& [x, y] : pairs) entries.push_back(std::string(family) + ": " + x + op + y);
  };
  add("equivalence", skeleton.equivalence, " = ");
  add("always_before", skeleton.always_before, " <- ");
  add("always_after", skeleton.always_after, " -> ");
  add("never_together", skeleton.never_together, " # ");
  add("directly_follows", skeleton.directly_follows, " > ");
  for (const auto& [act, b] : skeleton.activity_frequencies)
    entries.push_back("activity_frequencies: " + act + " : min " + std::to_string(b.min) + ", max " +
                      std::to_string(b.max));
  return assemble_abstraction(header, entries, budget);
}

}  // namespace pmllm
