#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "fixtures.hpp"
#include "pmllm/error.hpp"
#include "pmllm/event_log.hpp"
#include "pmllm/log_io.hpp"

using namespace pmllm;

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

Column strings(std::string name, std::vector<std::string> v) {
  Column c{std::move(name), ColumnType::String, {}};
  for (auto& s : v) c.values.emplace_back(std::move(s));
  return c;
}

Column times(std::vector<std::int64_t> secs) {
  Column c{"timestamp", ColumnType::Timestamp, {}};
  for (auto s : secs) c.values.emplace_back(Timestamp::from_seconds(s));
  return c;
}

}  // namespace

TEST(Timestamp, IsoParsingAndFormatting) {
  auto ts = parse_iso8601("2024-01-01T00:00:00");
  ASSERT_TRUE(ts);
  EXPECT_EQ(ts->micros, fixtures::kJan1 * 1'000'000);
  EXPECT_EQ(parse_iso8601("2024-01-01T01:00:00+01:00")->micros, ts->micros);
  EXPECT_EQ(parse_iso8601("2024-01-01 00:00:00Z")->micros, ts->micros);
  EXPECT_EQ(parse_iso8601("2024-01-01T00:00:00.250")->micros, ts->micros + 250000);
  EXPECT_FALSE(parse_iso8601("yesterday"));
  EXPECT_FALSE(parse_iso8601("2024-13-01T00:00:00"));
  EXPECT_EQ(format_timestamp(*ts), "2024-01-01T00:00:00");
  EXPECT_EQ(format_timestamp(Timestamp{ts->micros + 5}), "2024-01-01T00:00:00.000005");
  EXPECT_EQ(format_timestamp_sql(*ts), "2024-01-01 00:00:00");
}

TEST(Timestamp, CustomFormat) {
  auto ts = parse_timestamp("01/02/2024 03:04:05", "%d/%m/%Y %H:%M:%S");
  ASSERT_TRUE(ts);
  EXPECT_EQ(format_timestamp(*ts), "2024-02-01T03:04:05");
  EXPECT_FALSE(parse_timestamp("2024-02-01", "%d/%m/%Y"));
}

TEST(Value, NumberFormats) {
  EXPECT_EQ(format_seconds(8400), "8400.0");
  EXPECT_EQ(format_seconds(4489.98886412873), "4490.0");
  EXPECT_EQ(format_seconds(-0.01), "0.0");
  EXPECT_EQ(format_float(2), "2.0");
  EXPECT_EQ(format_float(0.1), "0.1");
  EXPECT_EQ(to_text(Value{}), "");
  EXPECT_EQ(to_text(Value{true}), "true");
  EXPECT_EQ(to_text(Value{std::int64_t{-3}}), "-3");
}

TEST(EventLog, Log1Shape) {
  auto log = fixtures::log1();
  EXPECT_EQ(log.num_events(), 8u);
  EXPECT_EQ(log.num_cases(), 3u);
  EXPECT_EQ(log.activities(), (std::vector<std::string>{"A", "B", "C"}));
  ASSERT_EQ(log.columns().size(), 3u);
  EXPECT_EQ(log.columns()[0].name, "case_id");
  EXPECT_EQ(log.columns()[2].type, ColumnType::Timestamp);
}

TEST(EventLog, CanonicalSortIsStableOnTies) {
  auto log = EventLog({strings("case_id", {"b", "a", "b", "a"}), strings("activity", {"X", "Y", "Z", "W"}),
                       times({10, 5, 10, 5})},
                      {});
  std::vector<std::string> acts;
  for (std::size_t r = 0; r < log.num_events(); ++r) acts.push_back(log.activity(r));
  EXPECT_EQ(acts, (std::vector<std::string>{"Y", "W", "X", "Z"}));
  EXPECT_EQ(log.cases()[0].case_id, "a");
}

TEST(EventLog, ShuffledInputEqualsSorted) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 20; ++round) {
    auto raw = fixtures::random_raw_log(rng);
    struct Row {
      std::string c, a;
      std::int64_t t;
    };
    std::vector<Row> rows;
    for (const auto& rc : raw)
      for (const auto& e : rc.events) rows.push_back({rc.id, e.activity, e.seconds});
    // Shuffle, then restore the relative order of equal (case, time) rows so
    // both inputs describe the same log.
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<Row> shuffled;
    for (auto i : idx) shuffled.push_back(rows[i]);
    std::map<std::pair<std::string, std::int64_t>, std::vector<std::string>> tie_groups;
    for (const auto& r : rows) tie_groups[{r.c, r.t}].push_back(r.a);
    for (auto& r : shuffled) {
      auto& g = tie_groups[{r.c, r.t}];
      r.a = g.front();
      g.erase(g.begin());
    }
    auto build = [](const std::vector<Row>& rs) {
      Column c{"case_id", ColumnType::String, {}}, a{"activity", ColumnType::String, {}},
          t{"timestamp", ColumnType::Timestamp, {}};
      for (const auto& r : rs) {
        c.values.emplace_back(r.c);
        a.values.emplace_back(r.a);
        t.values.emplace_back(Timestamp::from_seconds(r.t));
      }
      return EventLog({c, a, t}, {});
    };
    EXPECT_EQ(build(rows), build(shuffled));
    // Canonical ordering: non-decreasing time within each case.
    auto log = build(shuffled);
    for (const auto& span : log.cases())
      for (auto r = span.begin + 1; r < span.end; ++r) EXPECT_LE(log.timestamp(r - 1), log.timestamp(r));
  }
}

TEST(EventLog, ValidationErrors) {
  EXPECT_EQ(code_of([] { EventLog({strings("case_id", {"c"}), times({1})}, {}); }), ErrorCode::MissingColumn);
  EXPECT_EQ(code_of([] {
              EventLog({strings("case_id", {"c"}), strings("activity", {"A"}), strings("timestamp", {"x"})}, {});
            }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] {
              Column act{"activity", ColumnType::String, {Value{}}};
              EventLog({strings("case_id", {"c"}), act, times({1})}, {});
            }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { EventLog({strings("case_id", {"c", "d"}), strings("activity", {"A"}), times({1})}, {}); }),
            ErrorCode::InvalidArgument);
}

TEST(EventLog, GetCase) {
  auto log = fixtures::log1();
  auto c1 = get_case(log, "c1");
  ASSERT_EQ(c1.events.size(), 3u);
  EXPECT_EQ(c1.events[0].activity, "A");
  EXPECT_EQ(c1.events[2].activity, "C");
  auto c3 = get_case(log, "c3");
  ASSERT_EQ(c3.events.size(), 2u);
  EXPECT_EQ(c3.events[1].activity, "C");
  EXPECT_EQ(code_of([&] { get_case(log, "c9"); }), ErrorCode::UnknownCase);
}

TEST(EventLog, LastEventsWindow) {
  auto log = fixtures::log1();
  auto w2 = last_events_window(log, 2);
  ASSERT_EQ(w2.events.size(), 2u);
  EXPECT_EQ(w2.events[0].activity, "A");
  EXPECT_EQ(w2.events[0].case_id, "c3");
  EXPECT_EQ(w2.events[1].activity, "C");
  EXPECT_EQ(w2.events[1].case_id, "c3");
  EXPECT_EQ(last_events_window(log, 100).events.size(), 8u);
  auto w1 = last_events_window(log, 1);
  ASSERT_EQ(w1.events.size(), 1u);
  EXPECT_EQ(format_timestamp(w1.events[0].timestamp), "2024-01-03T01:00:00");
  EXPECT_EQ(code_of([&] { last_events_window(log, 0); }), ErrorCode::InvalidArgument);
}

TEST(EventLog, WindowIsGloballySortedAndBounded) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto log = fixtures::make_log(fixtures::random_raw_log(rng));
    const std::size_t n = 1 + rng() % 12;
    auto w = last_events_window(log, n);
    EXPECT_EQ(w.events.size(), std::min(n, log.num_events()));
    for (std::size_t k = 1; k < w.events.size(); ++k) EXPECT_LE(w.events[k - 1].timestamp, w.events[k].timestamp);
    // Nothing left out is later than the earliest included event.
    std::size_t later = 0;
    for (std::size_t r = 0; r < log.num_events(); ++r)
      if (log.timestamp(r) > w.events.front().timestamp) ++later;
    EXPECT_LE(later, w.events.size());
  }
}

TEST(Ocel, Fixture) {
  auto ocel = fixtures::ocel1();
  EXPECT_EQ(ocel.events().size(), 3u);
  EXPECT_EQ(ocel.objects().size(), 2u);
  EXPECT_EQ(ocel.relations().size(), 5u);
  auto objs = ocel.objects_of("e1");
  ASSERT_EQ(objs.size(), 2u);
  EXPECT_EQ(objs[0]->id, "o1");
  EXPECT_EQ(ocel.lifecycles().at("o1").size(), 3u);
  EXPECT_EQ(ocel.lifecycles().at("i1").size(), 2u);
}

TEST(Ocel, IntegrityErrors) {
  OcelEvent e{"e1", "a", Timestamp{0}, {}};
  OcelObject o{"o1", "t", {}};
  EXPECT_EQ(code_of([&] { Ocel({e, e}, {o}, {}); }), ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([&] { Ocel({e}, {o, o}, {}); }), ErrorCode::SchemaViolation);
  try {
    Ocel({e}, {o}, {{"e1", "o9", std::nullopt}});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::DanglingReference);
    EXPECT_EQ(err.subject(), "o9");
  }
}
