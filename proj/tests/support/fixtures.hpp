#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pmllm/event_log.hpp"
#include "pmllm/petri_net.hpp"

namespace fixtures {

inline constexpr std::string_view kLog1Csv =
    "case_id,activity,timestamp\n"
    "c1,A,2024-01-01T00:00:00\n"
    "c1,B,2024-01-01T01:00:00\n"
    "c1,C,2024-01-01T02:00:00\n"
    "c2,A,2024-01-02T00:00:00\n"
    "c2,B,2024-01-02T02:00:00\n"
    "c2,C,2024-01-02T04:00:00\n"
    "c3,A,2024-01-03T00:00:00\n"
    "c3,C,2024-01-03T01:00:00\n";

inline constexpr std::string_view kOcel1Json = R"({
  "objectTypes": [{"name": "order", "attributes": []}, {"name": "item", "attributes": []}],
  "eventTypes": [{"name": "place"}, {"name": "pack"}, {"name": "ship"}],
  "objects": [
    {"id": "o1", "type": "order", "attributes": []},
    {"id": "i1", "type": "item", "attributes": []}
  ],
  "events": [
    {"id": "e1", "type": "place", "time": "2024-01-01T00:00:00Z", "attributes": [],
     "relationships": [{"objectId": "o1", "qualifier": "order"}, {"objectId": "i1", "qualifier": "item"}]},
    {"id": "e2", "type": "pack", "time": "2024-01-01T01:00:00Z", "attributes": [],
     "relationships": [{"objectId": "o1", "qualifier": "order"}, {"objectId": "i1", "qualifier": "item"}]},
    {"id": "e3", "type": "ship", "time": "2024-01-01T02:00:00Z", "attributes": [],
     "relationships": [{"objectId": "o1", "qualifier": "order"}]}
  ]
})";

inline constexpr std::string_view kPn1Pnml = R"(<?xml version="1.0" encoding="UTF-8"?>
<pnml>
  <net id="pn1" type="http://www.pnml.org/version-2009/grammar/pnmlcoremodel">
    <page id="page0">
      <place id="p1"><name><text>p1</text></name><initialMarking><text>1</text></initialMarking></place>
      <place id="p2"><name><text>p2</text></name></place>
      <transition id="tA"><name><text>A</text></name></transition>
      <arc id="a1" source="p1" target="tA"/>
      <arc id="a2" source="tA" target="p2"/>
    </page>
    <finalmarkings>
      <marking><place idref="p2"><text>1</text></place></marking>
    </finalmarkings>
  </net>
</pnml>
)";

/// One case as the test side knows it: activities with seconds since epoch.
struct RawEvent {
  std::string activity;
  std::int64_t seconds;
};
struct RawCase {
  std::string id;
  std::vector<RawEvent> events;
};
using RawLog = std::vector<RawCase>;

/// Builds an EventLog straight from columns, without any parser.
inline pmllm::EventLog make_log(const RawLog& raw) {
  pmllm::Column c{"case_id", pmllm::ColumnType::String, {}}, a{"activity", pmllm::ColumnType::String, {}},
      t{"timestamp", pmllm::ColumnType::Timestamp, {}};
  for (const auto& rc : raw)
    for (const auto& e : rc.events) {
      c.values.emplace_back(rc.id);
      a.values.emplace_back(e.activity);
      t.values.emplace_back(pmllm::Timestamp::from_seconds(e.seconds));
    }
  return pmllm::EventLog({c, a, t}, {});
}

inline constexpr std::int64_t kJan1 = 1704067200;  // 2024-01-01T00:00:00Z

inline RawLog log1_raw() {
  const std::int64_t h = 3600, d = 86400;
  return {{"c1", {{"A", kJan1}, {"B", kJan1 + h}, {"C", kJan1 + 2 * h}}},
          {"c2", {{"A", kJan1 + d}, {"B", kJan1 + d + 2 * h}, {"C", kJan1 + d + 4 * h}}},
          {"c3", {{"A", kJan1 + 2 * d}, {"C", kJan1 + 2 * d + h}}}};
}

pmllm::EventLog log1();
pmllm::Ocel ocel1();
pmllm::PetriNet pn1();

/// Random log: up to max_cases cases of 1..max_events events over an
/// alphabet of up to max_alphabet activities. Case ids are zero padded so
/// their order matches generation order; timestamps are non-decreasing per
/// case and may repeat.
RawLog random_raw_log(std::mt19937_64& rng, int max_cases = 10, int max_events = 8, int max_alphabet = 5);

std::filesystem::path data_dir();
std::filesystem::path renderer_script();
std::filesystem::path cli_binary();

/// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
