#include "pmllm/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pmllm/error.hpp"

namespace pmllm {
namespace {

void require_events(const EventLog& log) {
  if (log.empty()) throw Error(ErrorCode::EmptyLog, "event log has no events");
}

void require_events(const Ocel& ocel) {
  if (ocel.empty()) throw Error(ErrorCode::EmptyOcel, "object-centric log has no events");
}

template <typename Sequences>
Dfg dfg_of(const Sequences& sequences) {
  Dfg dfg;
  for (const auto& seq : sequences) {
    if (seq.empty()) continue;
    ++dfg.start_activities[seq.front()];
    ++dfg.end_activities[seq.back()];
    for (std::size_t i = 1; i < seq.size(); ++i) ++dfg.edges[{seq[i - 1], seq[i]}];
  }
  return dfg;
}

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

std::size_t count_of(const std::vector<std::string>& trace, const std::string& a) {
  return static_cast<std::size_t>(std::count(trace.begin(), trace.end(), a));
}

}  // namespace

std::vector<std::vector<std::string>> case_sequences(const EventLog& log) {
  std::vector<std::vector<std::string>> out;
  out.reserve(log.num_cases());
  for (const auto& span : log.cases()) {
    auto& seq = out.emplace_back();
    for (std::size_t r = span.begin; r < span.end; ++r) seq.push_back(log.activity(r));
  }
  return out;
}

Dfg compute_dfg(const EventLog& log) {
  require_events(log);
  return dfg_of(case_sequences(log));
}

PerformanceDfg compute_performance_dfg(const EventLog& log) {
  require_events(log);
  std::map<ActivityPair, std::vector<double>> deltas;
  for (const auto& span : log.cases())
    for (std::size_t r = span.begin + 1; r < span.end; ++r)
      deltas[{log.activity(r - 1), log.activity(r)}].push_back(
          log.timestamp(r).seconds_since(log.timestamp(r - 1)));

  PerformanceDfg out;
  for (auto& [edge, xs] : deltas) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    EdgePerformance p;
    p.count = static_cast<std::int64_t>(n);
    p.mean_seconds = mean_of(xs);
    p.min_seconds = xs.front();
    p.max_seconds = xs.back();
    p.median_seconds = n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
    out.edges.emplace(edge, p);
  }
  return out;
}

VariantTable compute_variants(const EventLog& log) {
  require_events(log);
  VariantTable table;
  const auto seqs = case_sequences(log);
  const auto spans = log.cases();
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    auto& v = table.variants[seqs[i]];
    ++v.count;
    v.case_ids.push_back(spans[i].case_id);
  }
  return table;
}

TemporalProfile compute_temporal_profile(const EventLog& log) {
  require_events(log);
  std::map<ActivityPair, std::vector<double>> observations;
  for (const auto& span : log.cases())
    for (std::size_t i = span.begin; i < span.end; ++i)
      for (std::size_t j = i + 1; j < span.end; ++j)
        observations[{log.activity(i), log.activity(j)}].push_back(
            log.timestamp(j).seconds_since(log.timestamp(i)));

  TemporalProfile tp;
  for (const auto& [pair, xs] : observations) {
    const double mean = mean_of(xs);
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    tp.pairs.emplace(pair, PairTiming{mean, std::sqrt(ss / static_cast<double>(xs.size())),
                                      static_cast<std::int64_t>(xs.size())});
  }
  return tp;
}

LogSkeleton discover_log_skeleton(const EventLog& log) {
  require_events(log);
  const auto acts = log.activities();
  const auto seqs = case_sequences(log);
  LogSkeleton sk;

  // Per case: activity counts, and for each activity whether every occurrence
  // has an earlier / later occurrence of each other activity.
  std::vector<std::map<std::string, std::int64_t>> counts(seqs.size());
  for (std::size_t c = 0; c < seqs.size(); ++c)
    for (const auto& a : seqs[c]) ++counts[c][a];
  auto count = [&](std::size_t c, const std::string& a) -> std::int64_t {
    auto it = counts[c].find(a);
    return it == counts[c].end() ? 0 : it->second;
  };

  for (const auto& a : acts) {
    FrequencyBounds b{std::numeric_limits<std::int64_t>::max(), 0};
    for (std::size_t c = 0; c < seqs.size(); ++c) {
      b.min = std::min(b.min, count(c, a));
      b.max = std::max(b.max, count(c, a));
    }
    sk.activity_frequencies[a] = b;
  }

  for (std::size_t i = 0; i < acts.size(); ++i) {
    for (std::size_t j = i + 1; j < acts.size(); ++j) {
      const auto& a = acts[i];
      const auto& b = acts[j];
      bool equal = true, apart = true;
      for (std::size_t c = 0; c < seqs.size(); ++c) {
        equal = equal && count(c, a) == count(c, b);
        apart = apart && (count(c, a) == 0 || count(c, b) == 0);
      }
      if (equal) sk.equivalence.insert({a, b});
      if (apart) sk.never_together.insert({a, b});
    }
  }

  // before[x][y]: every occurrence of x so far has an earlier y.
  for (const auto& x : acts) {
    for (const auto& y : acts) {
      if (x == y) continue;
      bool before = true, after = true;
      for (const auto& seq : seqs) {
        bool seen_y = false;
        for (const auto& e : seq) {
          if (e == x && !seen_y) before = false;
          if (e == y) seen_y = true;
        }
        seen_y = false;
        for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
          if (*it == x && !seen_y) after = false;
          if (*it == y) seen_y = true;
        }
      }
      if (before) sk.always_before.insert({x, y});
      if (after) sk.always_after.insert({x, y});
    }
  }

  for (const auto& [edge, _] : dfg_of(seqs).edges) sk.directly_follows.insert(edge);
  return sk;
}

std::string declare_template_name(DeclareTemplate t) {
  switch (t) {
    case DeclareTemplate::Existence: return "existence";
    case DeclareTemplate::ExactlyOne: return "exactly_one";
    case DeclareTemplate::Init: return "init";
    case DeclareTemplate::End: return "end";
    case DeclareTemplate::RespondedExistence: return "responded_existence";
    case DeclareTemplate::Response: return "response";
    case DeclareTemplate::Precedence: return "precedence";
    case DeclareTemplate::Succession: return "succession";
    case DeclareTemplate::ChainResponse: return "chain_response";
    case DeclareTemplate::ChainPrecedence: return "chain_precedence";
    case DeclareTemplate::Coexistence: return "coexistence";
    case DeclareTemplate::Noncoexistence: return "noncoexistence";
  }
  return {};
}

bool is_unary(DeclareTemplate t) {
  return t == DeclareTemplate::Existence || t == DeclareTemplate::ExactlyOne ||
         t == DeclareTemplate::Init || t == DeclareTemplate::End;
}

bool is_symmetric(DeclareTemplate t) {
  return t == DeclareTemplate::Coexistence || t == DeclareTemplate::Noncoexistence;
}

bool satisfies(DeclareTemplate t, const std::vector<std::string>& trace, const std::string& a,
               const std::string& b) {
  const std::size_t n = trace.size();
  switch (t) {
    case DeclareTemplate::Existence: return count_of(trace, a) >= 1;
    case DeclareTemplate::ExactlyOne: return count_of(trace, a) == 1;
    case DeclareTemplate::Init: return n > 0 && trace.front() == a;
    case DeclareTemplate::End: return n > 0 && trace.back() == a;
    case DeclareTemplate::RespondedExistence: return count_of(trace, a) == 0 || count_of(trace, b) > 0;
    case DeclareTemplate::Response: {
      // The last a must have a later b.
      bool pending = false;
      for (const auto& e : trace) {
        if (e == a) pending = true;
        else if (e == b) pending = false;
      }
      return !pending;
    }
    case DeclareTemplate::Precedence: {
      bool seen_a = false;
      for (const auto& e : trace) {
        if (e == b && !seen_a) return false;
        if (e == a) seen_a = true;
      }
      return true;
    }
    case DeclareTemplate::Succession:
      return satisfies(DeclareTemplate::Response, trace, a, b) &&
             satisfies(DeclareTemplate::Precedence, trace, a, b);
    case DeclareTemplate::ChainResponse:
      for (std::size_t i = 0; i < n; ++i)
        if (trace[i] == a && (i + 1 == n || trace[i + 1] != b)) return false;
      return true;
    case DeclareTemplate::ChainPrecedence:
      for (std::size_t i = 0; i < n; ++i)
        if (trace[i] == b && (i == 0 || trace[i - 1] != a)) return false;
      return true;
    case DeclareTemplate::Coexistence: return (count_of(trace, a) > 0) == (count_of(trace, b) > 0);
    case DeclareTemplate::Noncoexistence: return count_of(trace, a) == 0 || count_of(trace, b) == 0;
  }
  return false;
}

std::size_t DeclareModel::size() const {
  std::size_t n = 0;
  for (const auto& [_, cs] : constraints) n += cs.size();
  return n;
}

bool DeclareModel::contains(const std::string& template_name,
                            const std::vector<std::string>& params) const {
  auto it = constraints.find(template_name);
  if (it == constraints.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(),
                     [&](const DeclareConstraint& c) { return c.activities == params; });
}

DeclareModel discover_declare(const EventLog& log) {
  require_events(log);
  const auto acts = log.activities();
  const auto seqs = case_sequences(log);
  auto holds_everywhere = [&](DeclareTemplate t, const std::string& a, const std::string& b) {
    return std::all_of(seqs.begin(), seqs.end(),
                       [&](const auto& seq) { return satisfies(t, seq, a, b); });
  };

  DeclareModel model;
  for (auto t : kAllDeclareTemplates) {
    std::vector<DeclareConstraint> found;
    if (is_unary(t)) {
      for (const auto& a : acts)
        if (holds_everywhere(t, a, {})) found.push_back({{a}, 1.0});
    } else {
      for (const auto& a : acts)
        for (const auto& b : acts) {
          if (a == b || (is_symmetric(t) && b < a)) continue;
          if (holds_everywhere(t, a, b)) found.push_back({{a, b}, 1.0});
        }
    }
    if (!found.empty()) model.constraints.emplace(declare_template_name(t), std::move(found));
  }
  return model;
}

const std::vector<double>& FeatureTable::row(const std::string& id) const {
  auto it = std::find(row_ids.begin(), row_ids.end(), id);
  if (it == row_ids.end()) throw Error(ErrorCode::UnknownCase, "no feature row '" + id + "'", id);
  return rows[static_cast<std::size_t>(it - row_ids.begin())];
}

double FeatureTable::at(const std::string& id, const std::string& column) const {
  auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end())
    throw Error(ErrorCode::MissingColumn, "no feature '" + column + "'", column);
  return row(id)[static_cast<std::size_t>(it - columns.begin())];
}

std::vector<double> FeatureTable::column_values(const std::string& column) const {
  auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end())
    throw Error(ErrorCode::MissingColumn, "no feature '" + column + "'", column);
  const auto idx = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[idx]);
  return out;
}

FeatureTable extract_features(const EventLog& log) {
  require_events(log);
  const auto acts = log.activities();
  FeatureTable ft;
  ft.columns = {"events_count", "case_duration_seconds"};
  for (const auto& a : acts) ft.columns.push_back("count_" + a);
  for (const auto& span : log.cases()) {
    std::vector<double> row(ft.columns.size(), 0.0);
    row[0] = static_cast<double>(span.size());
    row[1] = log.timestamp(span.end - 1).seconds_since(log.timestamp(span.begin));
    for (std::size_t r = span.begin; r < span.end; ++r) {
      const auto pos = std::lower_bound(acts.begin(), acts.end(), log.activity(r)) - acts.begin();
      row[2 + static_cast<std::size_t>(pos)] += 1.0;
    }
    ft.row_ids.push_back(span.case_id);
    ft.rows.push_back(std::move(row));
  }
  return ft;
}

OcDfg compute_ocdfg(const Ocel& ocel) {
  require_events(ocel);
  const auto lifecycles = ocel.lifecycles();
  std::map<std::string, std::vector<std::vector<std::string>>> by_type;
  for (const auto& obj : ocel.objects()) {
    auto it = lifecycles.find(obj.id);
    if (it == lifecycles.end()) continue;
    auto& seq = by_type[obj.type].emplace_back();
    for (const auto* ev : it->second) seq.push_back(ev->activity);
  }
  OcDfg g;
  for (const auto& [type, seqs] : by_type) g.per_type.emplace(type, dfg_of(seqs));
  return g;
}

FeatureTable extract_ocel_features(const Ocel& ocel) {
  require_events(ocel);
  std::set<std::string> act_set;
  for (const auto& e : ocel.events()) act_set.insert(e.activity);
  const std::vector<std::string> acts(act_set.begin(), act_set.end());
  const auto lifecycles = ocel.lifecycles();

  FeatureTable ft;
  ft.columns = {"events_count", "lifecycle_duration_seconds"};
  for (const auto& a : acts) ft.columns.push_back("count_" + a);

  std::vector<const OcelObject*> objects;
  for (const auto& o : ocel.objects()) objects.push_back(&o);
  std::sort(objects.begin(), objects.end(),
            [](const OcelObject* x, const OcelObject* y) { return x->id < y->id; });
  for (const auto* obj : objects) {
    std::vector<double> row(ft.columns.size(), 0.0);
    if (auto it = lifecycles.find(obj->id); it != lifecycles.end() && !it->second.empty()) {
      const auto& evs = it->second;
      row[0] = static_cast<double>(evs.size());
      row[1] = evs.back()->time.seconds_since(evs.front()->time);
      for (const auto* ev : evs) {
        const auto pos = std::lower_bound(acts.begin(), acts.end(), ev->activity) - acts.begin();
        row[2 + static_cast<std::size_t>(pos)] += 1.0;
      }
    }
    ft.row_ids.push_back(obj->id);
    ft.rows.push_back(std::move(row));
  }
  return ft;
}

}  // namespace pmllm
