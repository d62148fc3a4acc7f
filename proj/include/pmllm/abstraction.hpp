#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pmllm/discovery.hpp"
#include "pmllm/event_log.hpp"
#include "pmllm/petri_net.hpp"

namespace pmllm {

/// Length limit for one abstraction, in characters (UTF-8 code points).
struct Budget {
  std::size_t max_chars = 10000;
  bool include_header = true;
};

struct Abstraction {
  std::string text;
  std::size_t entries_included = 0;
  std::size_t entries_total = 0;
  bool truncated = false;
  /// Length of the last emitted segment: the last entry, or the header when
  /// no entry was emitted.
  std::size_t last_segment_chars = 0;
};

std::size_t utf8_length(std::string_view s);

/// Greedy fill: emit the header (if enabled), then append entries in order
/// while the text is still shorter than max_chars. The entry that crosses the
/// limit is kept and nothing follows it. Each entry is one line; a trailing
/// newline is added when missing.
Abstraction assemble_abstraction(std::string_view header, const std::vector<std::string>& entries,
                                 const Budget& budget);

Abstraction abstract_dfg(const Dfg& dfg, const Budget& budget = {});
Abstraction abstract_variants(const VariantTable& variants, const Budget& budget = {});
Abstraction abstract_log_attributes(const EventLog& log, const Budget& budget = {});
Abstraction abstract_log_features(const FeatureTable& features, const Budget& budget = {});
Abstraction abstract_case(const Case& c, const Budget& budget = {});
Abstraction abstract_ocel(const Ocel& ocel, const Budget& budget = {});
Abstraction abstract_ocel_ocdfg(const OcDfg& ocdfg, const Budget& budget = {});
Abstraction abstract_ocel_features(const FeatureTable& features, const Budget& budget = {});
Abstraction abstract_event_stream(const EventStreamWindow& window, const Budget& budget = {});
Abstraction abstract_temporal_profile(const TemporalProfile& profile, const Budget& budget = {});
Abstraction abstract_petri_net(const PetriNet& net, const Budget& budget = {});
Abstraction abstract_declare(const DeclareModel& model, const Budget& budget = {});
Abstraction abstract_log_skeleton(const LogSkeleton& skeleton, const Budget& budget = {});

/// Quantile with lower interpolation: sorted[floor(q * (n - 1))].
double lower_quantile(std::vector<double> values, double q);

/// Entry renderers shared with other prompt builders.
std::string render_dfg_entry(const ActivityPair& edge, std::int64_t frequency);
std::string transition_name(const PetriNet& net, const std::string& transition_id);

}  // namespace pmllm
