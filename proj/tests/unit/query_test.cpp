#include <gtest/gtest.h>

#include <atomic>
#include <functional>
#include <random>
#include <thread>

#include "fixtures.hpp"
#include "pmllm/error.hpp"
#include "pmllm/log_io.hpp"
#include "pmllm/prompt_templates.hpp"
#include "pmllm/query.hpp"

using namespace pmllm;
using namespace std::chrono_literals;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no pmllm::Error thrown";
  return ErrorCode::InvalidArgument;
}

// Canonical dump of the whole table, used to detect any modification.
std::string checksum(const SqlSession& s) {
  return s.execute("SELECT * FROM event_log ORDER BY case_id, timestamp, activity").to_csv();
}

const char* kThroughputB =
    "SELECT AVG(d) FROM (SELECT case_id, date_diff('second', MIN(timestamp), MAX(timestamp)) AS d "
    "FROM event_log GROUP BY case_id HAVING SUM(activity = 'B') > 0)";

}  // namespace

TEST(Schema, Log1) {
  auto s = describe_schema(fixtures::log1());
  ASSERT_EQ(s.tables.size(), 1u);
  const auto* t = s.find_table("event_log");
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->row_count, 8u);
  ASSERT_EQ(t->columns.size(), 3u);
  EXPECT_EQ(t->columns[0].name, "case_id");
  EXPECT_EQ(t->columns[0].annotation, "case identifier");
  EXPECT_EQ(t->columns[2].type, ColumnType::Timestamp);
  const auto text = s.render();
  EXPECT_NE(text.find("Table event_log (8 rows):"), std::string::npos) << text;
  EXPECT_NE(text.find("  - timestamp (timestamp): event timestamp (UTC)"), std::string::npos) << text;
}

TEST(Schema, Ocel) {
  auto s = describe_schema(fixtures::ocel1());
  ASSERT_NE(s.find_table("events"), nullptr);
  ASSERT_NE(s.find_table("objects"), nullptr);
  ASSERT_NE(s.find_table("e2o"), nullptr);
  EXPECT_EQ(s.find_table("e2o")->row_count, 5u);
  EXPECT_FALSE(s.join_keys.empty());
  EXPECT_NE(s.render().find("Join keys:"), std::string::npos);
}

TEST(Query, CountDistinctCases) {
  auto r = execute_sql(fixtures::log1(), "SELECT COUNT(DISTINCT case_id) AS n FROM event_log");
  ASSERT_EQ(r.row_count, 1u);
  EXPECT_EQ(r.columns[0].name, "n");
  EXPECT_EQ(r.columns[0].type, ColumnType::Integer);
  EXPECT_EQ(std::get<std::int64_t>(r.rows[0][0]), 3);
}

TEST(Query, ThroughputOfCasesWithB) {
  auto r = execute_sql(fixtures::log1(), kThroughputB);
  EXPECT_DOUBLE_EQ(std::get<double>(r.rows[0][0]), 10800.0);
  auto e = execute_sql(fixtures::log1(),
                       "SELECT AVG(d) FROM (SELECT MAX(epoch(timestamp)) - MIN(epoch(timestamp)) AS d "
                       "FROM event_log WHERE case_id IN (SELECT case_id FROM event_log WHERE activity = 'B') "
                       "GROUP BY case_id)");
  EXPECT_DOUBLE_EQ(std::get<double>(e.rows[0][0]), 10800.0);
}

TEST(Query, DateDiffParts) {
  auto r = execute_sql(fixtures::log1(),
                       "SELECT date_diff('hour', '2024-01-01 00:00:00', '2024-01-01 05:59:00'), "
                       "date_diff('day', '2024-01-01 00:00:00', '2024-01-03 12:00:00'), "
                       "date_diff('minute', '2024-01-01 00:00:00', '2024-01-01 00:01:30'), "
                       "epoch('1970-01-02 00:00:00')");
  EXPECT_EQ(std::get<std::int64_t>(r.rows[0][0]), 5);
  EXPECT_EQ(std::get<std::int64_t>(r.rows[0][1]), 2);
  EXPECT_EQ(std::get<std::int64_t>(r.rows[0][2]), 1);
  EXPECT_DOUBLE_EQ(std::get<double>(r.rows[0][3]), 86400.0);
}

TEST(Query, TimestampsComeBackTyped) {
  auto r = execute_sql(fixtures::log1(), "SELECT MIN(timestamp) AS t FROM event_log");
  // MIN keeps no declared type in SQLite, so plain columns are the typed path.
  auto col = execute_sql(fixtures::log1(), "SELECT timestamp FROM event_log ORDER BY timestamp LIMIT 1");
  EXPECT_EQ(col.columns[0].type, ColumnType::Timestamp);
  EXPECT_EQ(std::get<Timestamp>(col.rows[0][0]), Timestamp::from_seconds(fixtures::kJan1));
  EXPECT_EQ(r.row_count, 1u);
}

TEST(Query, OcelJoins) {
  auto r = execute_sql(fixtures::ocel1(),
                       "SELECT o.type, COUNT(*) AS n FROM e2o JOIN objects o ON o.id = e2o.object_id "
                       "JOIN events e ON e.id = e2o.event_id GROUP BY o.type ORDER BY o.type");
  ASSERT_EQ(r.row_count, 2u);
  EXPECT_EQ(std::get<std::string>(r.rows[0][0]), "item");
  EXPECT_EQ(std::get<std::int64_t>(r.rows[0][1]), 2);
  EXPECT_EQ(std::get<std::string>(r.rows[1][0]), "order");
  EXPECT_EQ(std::get<std::int64_t>(r.rows[1][1]), 3);
}

TEST(Query, Errors) {
  SqlSession s(fixtures::log1());
  EXPECT_EQ(code_of([&] { s.execute("SELECT nope FROM event_log"); }), ErrorCode::UnknownTableOrColumn);
  EXPECT_EQ(code_of([&] { s.execute("SELECT * FROM missing"); }), ErrorCode::UnknownTableOrColumn);
  EXPECT_EQ(code_of([&] { s.execute("SELECT FROM WHERE"); }), ErrorCode::SqlParse);
  EXPECT_EQ(code_of([&] { s.execute(""); }), ErrorCode::SqlParse);
  EXPECT_EQ(code_of([&] { s.execute("  -- only a comment"); }), ErrorCode::SqlParse);
}

TEST(Gate, AcceptsReadOnlyForms) {
  for (const char* sql : {"SELECT 1", "select 1;", "WITH x AS (SELECT 1) SELECT * FROM x", "(SELECT 1)",
                          "SELECT replace(activity, 'A', 'Z') FROM event_log",
                          "SELECT 'DROP TABLE event_log; DELETE' AS s", "SELECT 1 -- DELETE\n",
                          "SELECT \"activity\" FROM event_log /* UPDATE */"})
    EXPECT_NO_THROW(check_select_only(sql)) << sql;
}

TEST(Gate, RejectsWritesAndStacking) {
  SqlSession s(fixtures::log1());
  const auto before = checksum(s);
  const auto dispatched = s.dispatched();
  const std::vector<std::string> attacks{
      "DELETE FROM event_log",
      "DROP TABLE event_log",
      "UPDATE event_log SET activity = 'X'",
      "INSERT INTO event_log VALUES ('c9', 'Z', '2024-01-01 00:00:00')",
      "SELECT 1; DROP TABLE event_log",
      "SELECT * FROM event_log; DELETE FROM event_log",
      "WITH d AS (SELECT 1) DELETE FROM event_log",
      "CREATE TABLE t AS SELECT * FROM event_log",
      "ATTACH DATABASE '/tmp/x.db' AS x",
      "PRAGMA query_only = OFF",
      "REPLACE INTO event_log VALUES ('c1', 'A', '2024-01-01 00:00:00')",
      "VACUUM",
      "BEGIN; DELETE FROM event_log; COMMIT",
      "SELECT 1;;SELECT 2",
      "ALTER TABLE event_log ADD COLUMN x",
  };
  for (const auto& sql : attacks) {
    const auto code = code_of([&] { s.execute(sql); });
    EXPECT_TRUE(code == ErrorCode::NonSelectStatement || code == ErrorCode::SqlParse) << sql;
  }
  EXPECT_EQ(s.dispatched(), dispatched);
  EXPECT_EQ(checksum(s), before);
}

TEST(Gate, SourceLogIsUntouched) {
  const auto log = fixtures::log1();
  const auto csv = to_csv(log);
  SqlSession s(log);
  (void)s.execute("SELECT * FROM event_log");
  EXPECT_EQ(to_csv(log), csv);
}

TEST(Query, Timeout) {
  SqlSession s(fixtures::log1());
  const auto started = std::chrono::steady_clock::now();
  try {
    s.execute("WITH RECURSIVE r(i) AS (SELECT 1 UNION ALL SELECT i + 1 FROM r) SELECT COUNT(*) FROM r", 200ms);
    FAIL() << "no timeout";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExecutionError);
    EXPECT_EQ(e.subject(), "timeout");
  }
  EXPECT_LT(std::chrono::steady_clock::now() - started, 5s);
  // The session is still usable afterwards.
  EXPECT_EQ(std::get<std::int64_t>(s.execute("SELECT COUNT(*) FROM event_log").rows[0][0]), 8);
}

TEST(Query, ConcurrentExecution) {
  SqlSession s(fixtures::log1());
  std::vector<std::thread> threads;
  std::atomic<int> wrong{0};
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&] {
      for (int i = 0; i < 50; ++i) {
        auto r = s.execute(kThroughputB);
        if (std::get<double>(r.rows[0][0]) != 10800.0) ++wrong;
      }
    });
  for (auto& t : threads) t.join();
  EXPECT_EQ(wrong.load(), 0);
  EXPECT_EQ(s.dispatched(), 400u);
}

TEST(Query, CountMatchesEventsProperty) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 30; ++i) {
    auto raw = fixtures::random_raw_log(rng);
    auto log = fixtures::make_log(raw);
    auto r = execute_sql(log, "SELECT COUNT(*), COUNT(DISTINCT case_id) FROM event_log");
    EXPECT_EQ(std::get<std::int64_t>(r.rows[0][0]), static_cast<std::int64_t>(log.num_events()));
    EXPECT_EQ(std::get<std::int64_t>(r.rows[0][1]), static_cast<std::int64_t>(raw.size()));
  }
}

TEST(Result, TextAndCsv) {
  auto r = execute_sql(fixtures::log1(), "SELECT case_id, COUNT(*) AS n FROM event_log GROUP BY case_id ORDER BY case_id");
  EXPECT_EQ(r.to_csv(), "case_id,n\r\nc1,3\r\nc2,3\r\nc3,2\r\n");
  const auto table = r.to_text_table();
  EXPECT_NE(table.find("case_id | n"), std::string::npos) << table;
  EXPECT_NE(table.find("(3 rows)"), std::string::npos);
  const auto cut = r.to_text_table(1);
  EXPECT_NE(cut.find("... (2 more rows)"), std::string::npos) << cut;
}

TEST(Nl2Sql, PromptLayout) {
  auto schema = describe_schema(fixtures::log1());
  const auto& t = PromptTemplates::builtin();
  auto p = build_nl2sql_prompt(schema, "How many cases?", std::string_view("Cases are orders."));
  const auto pos = [&](const std::string& s) { return p.find(s); };
  EXPECT_LT(pos(t.get("nl2sql.intro")), pos(t.get("nl2sql.schema_title")));
  EXPECT_LT(pos(schema.render()), pos(t.get("nl2sql.dialect_title")));
  EXPECT_LT(pos(t.get("nl2sql.dialect_title")), pos("Cases are orders."));
  EXPECT_LT(pos("Cases are orders."), pos("How many cases?"));
  EXPECT_LT(pos("How many cases?"), pos(t.get("nl2sql.instruction")));
  EXPECT_EQ(build_nl2sql_prompt(schema, "q").find(t.get("nl2sql.knowledge_title")), std::string::npos);
}

TEST(Nl2Sql, ParseSql) {
  EXPECT_EQ(parse_sql_from_response("Here:\n```sql\nSELECT 1;\n```\nDone"), "SELECT 1");
  EXPECT_EQ(parse_sql_from_response("```\nSELECT 2\n```"), "SELECT 2");
  EXPECT_EQ(parse_sql_from_response("The query is SELECT 3 ;  \n"), "SELECT 3");
  EXPECT_EQ(code_of([] { parse_sql_from_response("I cannot answer that."); }), ErrorCode::NoSqlFound);
  EXPECT_EQ(code_of([] { parse_sql_from_response("preselected nothing"); }), ErrorCode::NoSqlFound);
}

TEST(Nl2Sql, RoundTrip) {
  const auto sql = parse_sql_from_response(std::string("```sql\n") + kThroughputB + "\n```");
  EXPECT_DOUBLE_EQ(std::get<double>(execute_sql(fixtures::log1(), sql).rows[0][0]), 10800.0);
}
