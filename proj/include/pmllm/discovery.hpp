#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pmllm/event_log.hpp"

namespace pmllm {

using ActivityPair = std::pair<std::string, std::string>;

/// Directly-follows graph with start/end activity counts.
struct Dfg {
  std::map<ActivityPair, std::int64_t> edges;
  std::map<std::string, std::int64_t> start_activities;
  std::map<std::string, std::int64_t> end_activities;

  friend bool operator==(const Dfg&, const Dfg&) = default;
};

struct EdgePerformance {
  double mean_seconds = 0;
  double median_seconds = 0;
  double min_seconds = 0;
  double max_seconds = 0;
  std::int64_t count = 0;
};

struct PerformanceDfg {
  std::map<ActivityPair, EdgePerformance> edges;
};

struct Variant {
  std::int64_t count = 0;
  std::vector<std::string> case_ids;  // every case following the variant, sorted
};

struct VariantTable {
  std::map<std::vector<std::string>, Variant> variants;
};

struct PairTiming {
  double mean_seconds = 0;
  double stdev_seconds = 0;  // population standard deviation
  std::int64_t observation_count = 0;
};

struct TemporalProfile {
  std::map<ActivityPair, PairTiming> pairs;
};

struct FrequencyBounds {
  std::int64_t min = 0;
  std::int64_t max = 0;

  friend bool operator==(const FrequencyBounds&, const FrequencyBounds&) = default;
};

/// Unordered pairs are stored with first < second.
struct LogSkeleton {
  std::set<ActivityPair> equivalence;
  std::set<ActivityPair> always_before;  // (b, a): every b is preceded by some a
  std::set<ActivityPair> always_after;   // (a, b): every a is followed by some b
  std::set<ActivityPair> never_together;
  std::set<ActivityPair> directly_follows;
  std::map<std::string, FrequencyBounds> activity_frequencies;

  friend bool operator==(const LogSkeleton&, const LogSkeleton&) = default;
};

enum class DeclareTemplate {
  Existence,
  ExactlyOne,
  Init,
  End,
  RespondedExistence,
  Response,
  Precedence,
  Succession,
  ChainResponse,
  ChainPrecedence,
  Coexistence,
  Noncoexistence,
};

inline constexpr DeclareTemplate kAllDeclareTemplates[] = {
    DeclareTemplate::Existence,         DeclareTemplate::ExactlyOne,
    DeclareTemplate::Init,              DeclareTemplate::End,
    DeclareTemplate::RespondedExistence, DeclareTemplate::Response,
    DeclareTemplate::Precedence,        DeclareTemplate::Succession,
    DeclareTemplate::ChainResponse,     DeclareTemplate::ChainPrecedence,
    DeclareTemplate::Coexistence,       DeclareTemplate::Noncoexistence,
};

std::string declare_template_name(DeclareTemplate t);
bool is_unary(DeclareTemplate t);
bool is_symmetric(DeclareTemplate t);

struct DeclareConstraint {
  std::vector<std::string> activities;  // one or two parameters
  double support = 1.0;

  friend bool operator==(const DeclareConstraint&, const DeclareConstraint&) = default;
};

/// Constraints keyed by template name (e.g. "response").
struct DeclareModel {
  std::map<std::string, std::vector<DeclareConstraint>> constraints;

  std::size_t size() const;
  bool contains(const std::string& template_name, const std::vector<std::string>& params) const;
};

/// Whether one case (as an activity sequence) satisfies a template instance.
/// Symmetric templates ignore parameter order.
bool satisfies(DeclareTemplate t, const std::vector<std::string>& trace, const std::string& a,
               const std::string& b = {});

/// Numeric feature matrix, one row per case (or object).
struct FeatureTable {
  std::vector<std::string> columns;
  std::vector<std::string> row_ids;
  std::vector<std::vector<double>> rows;

  const std::vector<double>& row(const std::string& id) const;
  double at(const std::string& id, const std::string& column) const;
  std::vector<double> column_values(const std::string& column) const;
};

/// Per object type, a DFG over the lifecycles of that type's objects.
struct OcDfg {
  std::map<std::string, Dfg> per_type;
};

/// Activity sequences per case, in canonical case order.
std::vector<std::vector<std::string>> case_sequences(const EventLog& log);

Dfg compute_dfg(const EventLog& log);
PerformanceDfg compute_performance_dfg(const EventLog& log);
VariantTable compute_variants(const EventLog& log);
TemporalProfile compute_temporal_profile(const EventLog& log);
LogSkeleton discover_log_skeleton(const EventLog& log);
DeclareModel discover_declare(const EventLog& log);
FeatureTable extract_features(const EventLog& log);
OcDfg compute_ocdfg(const Ocel& ocel);
FeatureTable extract_ocel_features(const Ocel& ocel);

}  // namespace pmllm
