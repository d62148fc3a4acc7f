#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pmllm/value.hpp"

namespace pmllm {

struct Column {
  std::string name;
  ColumnType type = ColumnType::String;
  std::vector<Value> values;

  friend bool operator==(const Column&, const Column&) = default;
};

/// Builds a column from heterogeneous cells: a single non-null kind keeps its
/// type, integer+float widens to float, any other mix becomes string.
Column unify_column(std::string name, std::vector<Value> cells);

/// Names of the columns carrying the three mandatory roles.
struct RoleMap {
  std::string case_id = "case_id";
  std::string activity = "activity";
  std::string timestamp = "timestamp";

  friend bool operator==(const RoleMap&, const RoleMap&) = default;
};

/// Contiguous run of rows belonging to one case after canonical sorting.
struct CaseSpan {
  std::string case_id;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
};

/// Columnar event table. Construction validates the role columns, sorts rows
/// by (case id, timestamp, original row) and orders columns as
/// case id, activity, timestamp, then the remaining columns by name.
/// Immutable afterwards.
class EventLog {
 public:
  EventLog(std::vector<Column> columns, RoleMap roles);

  const std::vector<Column>& columns() const { return columns_; }
  const RoleMap& roles() const { return roles_; }
  const Column* find_column(std::string_view name) const;
  bool is_role_column(std::string_view name) const;

  std::size_t num_events() const { return num_rows_; }
  std::size_t num_cases() const { return cases_.size(); }
  bool empty() const { return num_rows_ == 0; }

  const std::string& case_id(std::size_t row) const;
  const std::string& activity(std::size_t row) const;
  Timestamp timestamp(std::size_t row) const;
  std::span<const CaseSpan> cases() const { return cases_; }

  /// Distinct activities in lexicographic order.
  std::vector<std::string> activities() const;

  friend bool operator==(const EventLog& a, const EventLog& b) {
    return a.roles_ == b.roles_ && a.columns_ == b.columns_;
  }

 private:
  std::vector<Column> columns_;
  RoleMap roles_;
  std::size_t num_rows_ = 0;
  std::vector<CaseSpan> cases_;
};

struct Event {
  std::string activity;
  Timestamp timestamp;
  std::vector<std::pair<std::string, Value>> attributes;  // non-role columns, by column order
};

struct Case {
  std::string case_id;
  std::vector<Event> events;
};

Case get_case(const EventLog& log, std::string_view case_id);

struct StreamEvent {
  std::string case_id;
  std::string activity;
  Timestamp timestamp;
};

/// The most recent events across all cases, oldest first.
struct EventStreamWindow {
  std::vector<StreamEvent> events;
};

/// The `n` globally latest events (ties keep canonical row order).
EventStreamWindow last_events_window(const EventLog& log, std::size_t n);

// Object-centric log.

struct OcelEvent {
  std::string id;
  std::string activity;
  Timestamp time;
  std::map<std::string, Value> attributes;
};

struct OcelObject {
  std::string id;
  std::string type;
  std::map<std::string, Value> attributes;
};

struct E2ORelation {
  std::string event_id;
  std::string object_id;
  std::optional<std::string> qualifier;

  friend bool operator==(const E2ORelation&, const E2ORelation&) = default;
};

/// Events, objects and event-to-object relations. Events are kept ordered by
/// (time, input order); ids are unique and relations reference existing ids.
class Ocel {
 public:
  Ocel() = default;
  Ocel(std::vector<OcelEvent> events, std::vector<OcelObject> objects,
       std::vector<E2ORelation> relations);

  const std::vector<OcelEvent>& events() const { return events_; }
  const std::vector<OcelObject>& objects() const { return objects_; }
  const std::vector<E2ORelation>& relations() const { return relations_; }
  bool empty() const { return events_.empty(); }

  const OcelEvent* find_event(std::string_view id) const;
  const OcelObject* find_object(std::string_view id) const;

  /// Related objects of an event, in relation-table order.
  std::vector<const OcelObject*> objects_of(std::string_view event_id) const;

  /// Time-ordered events of each object, keyed by object id.
  std::map<std::string, std::vector<const OcelEvent*>> lifecycles() const;

 private:
  std::vector<OcelEvent> events_;
  std::vector<OcelObject> objects_;
  std::vector<E2ORelation> relations_;
  std::map<std::string, std::size_t, std::less<>> event_index_;
  std::map<std::string, std::size_t, std::less<>> object_index_;
};

}  // namespace pmllm
