#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmllm/event_log.hpp"

namespace pmllm {

struct SchemaColumn {
  std::string name;
  ColumnType type;
  std::string annotation;  // role description, empty for plain attributes
};

struct SchemaTable {
  std::string name;
  std::size_t row_count = 0;
  std::vector<SchemaColumn> columns;
};

/// What an LLM needs to know to write SQL against a log: tables, columns with
/// role annotations, join keys and the dialect.
struct SchemaDescription {
  std::vector<SchemaTable> tables;
  std::vector<std::string> join_keys;
  std::string dialect_note;

  const SchemaTable* find_table(std::string_view name) const;
  std::string render() const;
};

/// Traditional logs expose `event_log`; object-centric logs expose `events`,
/// `objects` and `e2o`.
SchemaDescription describe_schema(const EventLog& log);
SchemaDescription describe_schema(const Ocel& ocel);

struct ResultColumn {
  std::string name;
  ColumnType type;
};

struct QueryResult {
  std::vector<ResultColumn> columns;
  std::vector<std::vector<Value>> rows;
  std::size_t row_count = 0;
  std::chrono::duration<double, std::milli> elapsed{};

  std::string to_csv() const;
  /// Fixed-width table; rows beyond `max_rows` are summarised in one line.
  std::string to_text_table(std::size_t max_rows = 50) const;
};

/// Lexical statement gate: exactly one statement, starting with SELECT or
/// WITH, free of data-modifying or session-changing keywords. Throws
/// NonSelectStatement or SqlParse.
void check_select_only(std::string_view sql);

/// In-memory SQL session over one log. The source is copied into the engine
/// once; the session is read-only and safe to share between threads.
class SqlSession {
 public:
  static constexpr std::chrono::milliseconds kDefaultTimeout{30'000};

  explicit SqlSession(const EventLog& log);
  explicit SqlSession(const Ocel& ocel);
  ~SqlSession();
  SqlSession(SqlSession&&) noexcept;
  SqlSession& operator=(SqlSession&&) noexcept;

  const SchemaDescription& schema() const;

  QueryResult execute(std::string_view sql,
                      std::chrono::milliseconds timeout = kDefaultTimeout) const;

  /// Number of statements that passed the gate and reached the engine.
  std::size_t dispatched() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

QueryResult execute_sql(const EventLog& log, std::string_view sql);
QueryResult execute_sql(const Ocel& ocel, std::string_view sql);

std::string build_nl2sql_prompt(const SchemaDescription& schema, std::string_view question,
                                std::optional<std::string_view> domain_knowledge = std::nullopt);

/// First fenced code block, else the text from the first SELECT to the end;
/// trailing semicolons and whitespace removed. Throws NoSqlFound.
std::string parse_sql_from_response(std::string_view response);

}  // namespace pmllm
