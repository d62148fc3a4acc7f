#include "pmllm/event_log.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "pmllm/error.hpp"

namespace pmllm {
namespace {

constexpr std::size_t kCaseCol = 0;
constexpr std::size_t kActivityCol = 1;
constexpr std::size_t kTimestampCol = 2;

std::optional<ColumnType> type_of(const Value& v) {
  switch (v.index()) {
    case 1: return ColumnType::String;
    case 2: return ColumnType::Integer;
    case 3: return ColumnType::Float;
    case 4: return ColumnType::Timestamp;
    case 5: return ColumnType::Boolean;
    default: return std::nullopt;
  }
}

bool matches(const Value& v, ColumnType t) {
  auto vt = type_of(v);
  return !vt || *vt == t;
}

}  // namespace

Column unify_column(std::string name, std::vector<Value> cells) {
  std::set<ColumnType> kinds;
  for (const auto& c : cells)
    if (auto t = type_of(c)) kinds.insert(*t);
  ColumnType type = ColumnType::String;
  if (kinds.size() == 1) {
    type = *kinds.begin();
  } else if (kinds == std::set{ColumnType::Integer, ColumnType::Float}) {
    type = ColumnType::Float;
    for (auto& c : cells)
      if (auto* i = std::get_if<std::int64_t>(&c)) c = static_cast<double>(*i);
  } else if (!kinds.empty()) {
    for (auto& c : cells)
      if (!is_null(c)) c = to_text(c);
  }
  return Column{std::move(name), type, std::move(cells)};
}

EventLog::EventLog(std::vector<Column> columns, RoleMap roles) : roles_(std::move(roles)) {
  auto take = [&](const std::string& name, ColumnType expected) -> Column {
    auto it = std::find_if(columns.begin(), columns.end(),
                           [&](const Column& c) { return c.name == name; });
    if (it == columns.end()) throw Error(ErrorCode::MissingColumn, "no column '" + name + "'", name);
    if (it->type != expected)
      throw Error(ErrorCode::InvalidArgument,
                  "role column '" + name + "' must have type " + std::string(to_string(expected)),
                  name);
    Column c = std::move(*it);
    columns.erase(it);
    return c;
  };
  if (roles_.case_id == roles_.activity || roles_.case_id == roles_.timestamp ||
      roles_.activity == roles_.timestamp)
    throw Error(ErrorCode::InvalidArgument, "each role needs its own column");

  std::vector<Column> ordered;
  ordered.push_back(take(roles_.case_id, ColumnType::String));
  ordered.push_back(take(roles_.activity, ColumnType::String));
  ordered.push_back(take(roles_.timestamp, ColumnType::Timestamp));
  std::sort(columns.begin(), columns.end(),
            [](const Column& a, const Column& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < columns.size(); ++i)
    if (columns[i].name == columns[i - 1].name)
      throw Error(ErrorCode::InvalidArgument, "duplicate column '" + columns[i].name + "'",
                  columns[i].name);
  for (auto& c : columns) ordered.push_back(std::move(c));

  num_rows_ = ordered.front().values.size();
  for (const auto& c : ordered) {
    if (c.values.size() != num_rows_)
      throw Error(ErrorCode::InvalidArgument, "column '" + c.name + "' has a different length",
                  c.name);
    for (const auto& v : c.values)
      if (!matches(v, c.type))
        throw Error(ErrorCode::InvalidArgument, "column '" + c.name + "' holds a mistyped value",
                    c.name);
  }
  for (std::size_t col : {kCaseCol, kActivityCol, kTimestampCol})
    for (std::size_t r = 0; r < num_rows_; ++r)
      if (is_null(ordered[col].values[r]))
        throw Error(ErrorCode::InvalidArgument,
                    "null " + ordered[col].name + " at row " + std::to_string(r),
                    std::to_string(r));

  // Canonical order: (case id, timestamp), stable on the input order.
  std::vector<std::size_t> perm(num_rows_);
  std::iota(perm.begin(), perm.end(), 0);
  const auto& cid = ordered[kCaseCol].values;
  const auto& ts = ordered[kTimestampCol].values;
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    const auto& ca = std::get<std::string>(cid[a]);
    const auto& cb = std::get<std::string>(cid[b]);
    if (ca != cb) return ca < cb;
    return std::get<Timestamp>(ts[a]) < std::get<Timestamp>(ts[b]);
  });
  for (auto& c : ordered) {
    std::vector<Value> sorted;
    sorted.reserve(num_rows_);
    for (auto i : perm) sorted.push_back(std::move(c.values[i]));
    c.values = std::move(sorted);
  }
  columns_ = std::move(ordered);

  for (std::size_t r = 0; r < num_rows_; ++r) {
    const auto& id = case_id(r);
    if (cases_.empty() || cases_.back().case_id != id) cases_.push_back({id, r, r});
    cases_.back().end = r + 1;
  }
}

const Column* EventLog::find_column(std::string_view name) const {
  for (const auto& c : columns_)
    if (c.name == name) return &c;
  return nullptr;
}

bool EventLog::is_role_column(std::string_view name) const {
  return name == roles_.case_id || name == roles_.activity || name == roles_.timestamp;
}

const std::string& EventLog::case_id(std::size_t row) const {
  return std::get<std::string>(columns_[kCaseCol].values[row]);
}

const std::string& EventLog::activity(std::size_t row) const {
  return std::get<std::string>(columns_[kActivityCol].values[row]);
}

Timestamp EventLog::timestamp(std::size_t row) const {
  return std::get<Timestamp>(columns_[kTimestampCol].values[row]);
}

std::vector<std::string> EventLog::activities() const {
  std::set<std::string> seen;
  for (std::size_t r = 0; r < num_rows_; ++r) seen.insert(activity(r));
  return {seen.begin(), seen.end()};
}

Case get_case(const EventLog& log, std::string_view case_id) {
  for (const auto& span : log.cases()) {
    if (span.case_id != case_id) continue;
    Case c{span.case_id, {}};
    for (std::size_t r = span.begin; r < span.end; ++r) {
      Event e{log.activity(r), log.timestamp(r), {}};
      for (std::size_t col = 3; col < log.columns().size(); ++col)
        e.attributes.emplace_back(log.columns()[col].name, log.columns()[col].values[r]);
      c.events.push_back(std::move(e));
    }
    return c;
  }
  throw Error(ErrorCode::UnknownCase, "no case '" + std::string(case_id) + "'",
              std::string(case_id));
}

EventStreamWindow last_events_window(const EventLog& log, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "window size must be at least 1");
  std::vector<std::size_t> rows(log.num_events());
  std::iota(rows.begin(), rows.end(), 0);
  std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
    return log.timestamp(a) < log.timestamp(b);
  });
  const std::size_t first = rows.size() > n ? rows.size() - n : 0;
  EventStreamWindow w;
  for (std::size_t i = first; i < rows.size(); ++i)
    w.events.push_back({log.case_id(rows[i]), log.activity(rows[i]), log.timestamp(rows[i])});
  return w;
}

Ocel::Ocel(std::vector<OcelEvent> events, std::vector<OcelObject> objects,
           std::vector<E2ORelation> relations)
    : objects_(std::move(objects)), relations_(std::move(relations)) {
  std::vector<std::size_t> perm(events.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return events[a].time < events[b].time; });
  events_.reserve(events.size());
  for (auto i : perm) events_.push_back(std::move(events[i]));

  for (std::size_t i = 0; i < events_.size(); ++i)
    if (!event_index_.emplace(events_[i].id, i).second)
      throw Error(ErrorCode::SchemaViolation, "duplicate event id '" + events_[i].id + "'",
                  events_[i].id);
  for (std::size_t i = 0; i < objects_.size(); ++i)
    if (!object_index_.emplace(objects_[i].id, i).second)
      throw Error(ErrorCode::SchemaViolation, "duplicate object id '" + objects_[i].id + "'",
                  objects_[i].id);
  for (const auto& rel : relations_) {
    if (!event_index_.contains(rel.event_id))
      throw Error(ErrorCode::DanglingReference, "relation names unknown event '" + rel.event_id + "'",
                  rel.event_id);
    if (!object_index_.contains(rel.object_id))
      throw Error(ErrorCode::DanglingReference,
                  "relation names unknown object '" + rel.object_id + "'", rel.object_id);
  }
}

const OcelEvent* Ocel::find_event(std::string_view id) const {
  auto it = event_index_.find(id);
  return it == event_index_.end() ? nullptr : &events_[it->second];
}

const OcelObject* Ocel::find_object(std::string_view id) const {
  auto it = object_index_.find(id);
  return it == object_index_.end() ? nullptr : &objects_[it->second];
}

std::vector<const OcelObject*> Ocel::objects_of(std::string_view event_id) const {
  std::vector<const OcelObject*> out;
  for (const auto& rel : relations_)
    if (rel.event_id == event_id) out.push_back(find_object(rel.object_id));
  return out;
}

std::map<std::string, std::vector<const OcelEvent*>> Ocel::lifecycles() const {
  std::map<std::string, std::vector<const OcelEvent*>> out;
  std::set<std::pair<std::string, std::string>> seen;  // (object, event)
  for (const auto& rel : relations_) {
    if (!seen.emplace(rel.object_id, rel.event_id).second) continue;
    out[rel.object_id].push_back(&events_[event_index_.find(rel.event_id)->second]);
  }
  // events_ is time-ordered, so order lifecycles by event position.
  for (auto& [_, evs] : out)
    std::stable_sort(evs.begin(), evs.end(),
                     [](const OcelEvent* a, const OcelEvent* b) { return a < b; });
  return out;
}

}  // namespace pmllm
