#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pmllm/event_log.hpp"

namespace pmllm {

// Imported logs name their role columns `case_id`, `activity` and
// `timestamp` whatever the source calls them, so logs read from different
// formats compare equal.

/// Splits RFC-4180 text into records. Quoted fields keep their quotes'
/// content verbatim; `quoted` reports which fields were quoted.
struct CsvField {
  std::string text;
  bool quoted = false;
};
std::vector<std::vector<CsvField>> parse_csv_records(std::string_view text);

/// Quotes a field when it contains a delimiter, quote, CR or LF.
std::string csv_escape(std::string_view field);

/// `mapping` names the source columns holding each role. Non-role column
/// types are inferred (integer, float, boolean, ISO timestamp, string); an
/// unquoted empty cell is null, a quoted empty cell is the empty string.
EventLog parse_csv_log(std::string_view text, const RoleMap& mapping = {},
                       std::string_view timestamp_format = "ISO8601");
EventLog import_csv(const std::filesystem::path& path, const RoleMap& mapping = {},
                    std::string_view timestamp_format = "ISO8601");

std::string to_csv(const EventLog& log);
void export_csv(const EventLog& log, const std::filesystem::path& path);

/// IEEE 1849 core: trace `concept:name` becomes the case id, event
/// `concept:name` the activity and `time:timestamp` the timestamp. Other
/// trace attributes become `case:<key>` columns.
EventLog parse_xes(std::string_view text);
EventLog import_xes(const std::filesystem::path& path);

std::string to_xes(const EventLog& log);
void export_xes(const EventLog& log, const std::filesystem::path& path);

Ocel parse_ocel_json(std::string_view text);
Ocel import_ocel_json(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace pmllm
