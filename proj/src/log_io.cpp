#include "pmllm/log_io.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pmllm/error.hpp"

namespace pmllm {
namespace {

namespace pt = boost::property_tree;
using json = nlohmann::json;

const RoleMap kCanonicalRoles{};

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  if (s.find_first_of("0123456789") == std::string_view::npos) return std::nullopt;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(std::string_view s) {
  std::string lower(s);
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lower == "true") return true;
  if (lower == "false") return false;
  return std::nullopt;
}

// Picks the narrowest type every non-null cell parses as.
Column infer_column(std::string name, const std::vector<std::optional<std::string>>& cells) {
  auto all = [&](auto&& parser) {
    for (const auto& c : cells)
      if (c && !parser(*c)) return false;
    return true;
  };
  auto convert = [&](ColumnType type, auto&& parser) {
    Column col{std::move(name), type, {}};
    col.values.reserve(cells.size());
    for (const auto& c : cells) {
      if (!c) col.values.emplace_back();
      else col.values.emplace_back(*parser(*c));
    }
    return col;
  };
  const bool any = std::any_of(cells.begin(), cells.end(), [](const auto& c) { return c.has_value(); });
  if (any) {
    if (all(parse_int)) return convert(ColumnType::Integer, parse_int);
    if (all(parse_double)) return convert(ColumnType::Float, parse_double);
    if (all(parse_bool)) return convert(ColumnType::Boolean, parse_bool);
    if (all(parse_iso8601)) return convert(ColumnType::Timestamp, parse_iso8601);
  }
  return convert(ColumnType::String,
                 [](const std::string& s) { return std::optional<std::string>(s); });
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string_view xes_tag(ColumnType t) {
  switch (t) {
    case ColumnType::String: return "string";
    case ColumnType::Integer: return "int";
    case ColumnType::Float: return "float";
    case ColumnType::Timestamp: return "date";
    case ColumnType::Boolean: return "boolean";
  }
  return "string";
}

// One typed XES attribute element; nullopt for non-attribute children.
std::optional<std::pair<std::string, Value>> read_xes_attribute(const std::string& tag,
                                                                const pt::ptree& node) {
  static const std::set<std::string> kTags{"string", "date", "int", "float", "boolean", "id"};
  if (!kTags.contains(tag)) return std::nullopt;
  const auto key = node.get<std::string>("<xmlattr>.key", "");
  const auto raw = node.get<std::string>("<xmlattr>.value", "");
  if (key.empty()) return std::nullopt;
  Value v;
  if (tag == "string" || tag == "id") {
    v = raw;
  } else if (tag == "date") {
    auto ts = parse_iso8601(raw);
    if (!ts) throw Error(ErrorCode::TimestampParse, "bad XES date '" + raw + "'", raw);
    v = *ts;
  } else if (tag == "int") {
    auto i = parse_int(raw);
    if (!i) throw Error(ErrorCode::SchemaViolation, "bad XES int '" + raw + "'", key);
    v = *i;
  } else if (tag == "float") {
    auto d = parse_double(raw);
    if (!d) throw Error(ErrorCode::SchemaViolation, "bad XES float '" + raw + "'", key);
    v = *d;
  } else {
    auto b = parse_bool(raw);
    if (!b) throw Error(ErrorCode::SchemaViolation, "bad XES boolean '" + raw + "'", key);
    v = *b;
  }
  return std::make_pair(key, std::move(v));
}

Value json_to_value(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return {};
    case json::value_t::string: return j.get<std::string>();
    case json::value_t::boolean: return j.get<bool>();
    case json::value_t::number_integer:
    case json::value_t::number_unsigned: return j.get<std::int64_t>();
    case json::value_t::number_float: return j.get<double>();
    default: return j.dump();
  }
}

const json& require(const json& parent, std::string_view key, json::value_t type,
                    const std::string& path) {
  const std::string child = path + "/" + std::string(key);
  auto it = parent.find(key);
  if (it == parent.end()) throw Error(ErrorCode::SchemaViolation, "missing " + child, child);
  const bool ok = type == json::value_t::number_integer ? it->is_number() : it->type() == type;
  if (!ok) throw Error(ErrorCode::SchemaViolation, "wrong type at " + child, child);
  return *it;
}

}  // namespace

std::vector<std::vector<CsvField>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<CsvField>> records;
  std::vector<CsvField> record;
  CsvField field;
  bool in_quotes = false;
  bool field_started = false;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  auto end_field = [&] {
    record.push_back(std::move(field));
    field = {};
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // A blank line yields one empty unquoted field; skip it.
    if (!(record.size() == 1 && record[0].text.empty() && !record[0].quoted))
      records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.text += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.text += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started) {
          in_quotes = true;
          field.quoted = true;
          field_started = true;
        } else {
          field.text += c;
        }
        break;
      case ',': end_field(); break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n': end_record(); break;
      default:
        field.text += c;
        field_started = true;
    }
  }
  if (in_quotes) throw Error(ErrorCode::InvalidArgument, "unterminated quoted CSV field");
  if (field_started || field.quoted || !record.empty()) end_record();
  return records;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

EventLog parse_csv_log(std::string_view text, const RoleMap& mapping,
                       std::string_view timestamp_format) {
  const auto records = parse_csv_records(text);
  if (records.empty()) throw Error(ErrorCode::EmptyLog, "CSV has no header");
  const auto& header = records.front();
  auto index_of = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i].text == name) return i;
    throw Error(ErrorCode::MissingColumn, "CSV header lacks '" + name + "'", name);
  };
  const std::size_t case_idx = index_of(mapping.case_id);
  const std::size_t act_idx = index_of(mapping.activity);
  const std::size_t ts_idx = index_of(mapping.timestamp);
  if (records.size() == 1) throw Error(ErrorCode::EmptyLog, "CSV has no events");

  const std::size_t rows = records.size() - 1;
  for (std::size_t r = 1; r < records.size(); ++r)
    if (records[r].size() != header.size())
      throw Error(ErrorCode::InvalidArgument,
                  "CSV row " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                      " fields, header has " + std::to_string(header.size()),
                  std::to_string(r));

  std::vector<Column> columns;
  auto role_column = [&](std::size_t idx, const std::string& name) {
    Column c{name, ColumnType::String, {}};
    for (std::size_t r = 1; r <= rows; ++r) {
      const auto& f = records[r][idx];
      if (f.text.empty() && !f.quoted) c.values.emplace_back();
      else c.values.emplace_back(f.text);
    }
    return c;
  };
  columns.push_back(role_column(case_idx, kCanonicalRoles.case_id));
  columns.push_back(role_column(act_idx, kCanonicalRoles.activity));

  Column ts{kCanonicalRoles.timestamp, ColumnType::Timestamp, {}};
  for (std::size_t r = 1; r <= rows; ++r) {
    const auto& raw = records[r][ts_idx].text;
    auto parsed = parse_timestamp(raw, timestamp_format);
    if (!parsed)
      throw Error(ErrorCode::TimestampParse,
                  "row " + std::to_string(r) + ": cannot parse timestamp '" + raw + "'", raw);
    ts.values.emplace_back(*parsed);
  }
  columns.push_back(std::move(ts));

  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i == case_idx || i == act_idx || i == ts_idx) continue;
    const auto& name = header[i].text;
    if (name == kCanonicalRoles.case_id || name == kCanonicalRoles.activity ||
        name == kCanonicalRoles.timestamp)
      throw Error(ErrorCode::InvalidArgument,
                  "column '" + name + "' clashes with a canonical role name", name);
    std::vector<std::optional<std::string>> cells;
    cells.reserve(rows);
    for (std::size_t r = 1; r <= rows; ++r) {
      const auto& f = records[r][i];
      if (f.text.empty() && !f.quoted) cells.emplace_back();
      else cells.emplace_back(f.text);
    }
    columns.push_back(infer_column(name, cells));
  }
  return EventLog(std::move(columns), kCanonicalRoles);
}

EventLog import_csv(const std::filesystem::path& path, const RoleMap& mapping,
                    std::string_view timestamp_format) {
  return parse_csv_log(read_text_file(path), mapping, timestamp_format);
}

std::string to_csv(const EventLog& log) {
  std::string out;
  const auto& cols = log.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) out += ',';
    out += csv_escape(cols[c].name);
  }
  out += "\r\n";
  for (std::size_t r = 0; r < log.num_events(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out += ',';
      const auto& v = cols[c].values[r];
      if (is_null(v)) continue;
      const auto text = to_text(v);
      out += text.empty() ? std::string("\"\"") : csv_escape(text);
    }
    out += "\r\n";
  }
  return out;
}

void export_csv(const EventLog& log, const std::filesystem::path& path) {
  write_text_file(path, to_csv(log));
}

EventLog parse_xes(std::string_view text) {
  pt::ptree doc;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::XmlParse, e.what(), "line " + std::to_string(e.line()));
  }
  const auto log_node = doc.get_child_optional("log");
  if (!log_node) throw Error(ErrorCode::XmlParse, "document has no <log> element", "log");

  struct Row {
    std::string case_id;
    std::map<std::string, Value> attrs;
  };
  std::vector<Row> rows;
  std::set<std::string> keys;
  std::size_t trace_index = 0;
  std::size_t event_index = 0;

  for (const auto& [tag, trace] : *log_node) {
    if (tag != "trace") continue;
    std::map<std::string, Value> trace_attrs;
    std::optional<std::string> case_id;
    for (const auto& [ttag, tnode] : trace) {
      auto attr = read_xes_attribute(ttag, tnode);
      if (!attr) continue;
      if (attr->first == "concept:name") case_id = to_text(attr->second);
      else trace_attrs["case:" + attr->first] = std::move(attr->second);
    }
    if (!case_id)
      throw Error(ErrorCode::MissingStandardAttribute,
                  "trace " + std::to_string(trace_index) + " lacks concept:name",
                  "trace " + std::to_string(trace_index));
    for (const auto& [etag, enode] : trace) {
      if (etag != "event") continue;
      Row row{*case_id, trace_attrs};
      for (const auto& [atag, anode] : enode) {
        auto attr = read_xes_attribute(atag, anode);
        if (!attr) continue;
        if (attr->first == "concept:name") row.attrs[kCanonicalRoles.activity] = to_text(attr->second);
        else if (attr->first == "time:timestamp") row.attrs[kCanonicalRoles.timestamp] = attr->second;
        else row.attrs[attr->first] = std::move(attr->second);
      }
      auto ts = row.attrs.find(kCanonicalRoles.timestamp);
      if (!row.attrs.contains(kCanonicalRoles.activity) || ts == row.attrs.end() ||
          !std::holds_alternative<Timestamp>(ts->second))
        throw Error(ErrorCode::MissingStandardAttribute,
                    "event " + std::to_string(event_index) + " lacks concept:name or time:timestamp",
                    std::to_string(event_index));
      for (const auto& [k, _] : row.attrs) keys.insert(k);
      rows.push_back(std::move(row));
      ++event_index;
    }
    ++trace_index;
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyLog, "XES log has no events");
  if (keys.contains(kCanonicalRoles.case_id))
    throw Error(ErrorCode::InvalidArgument, "attribute 'case_id' clashes with a role name",
                kCanonicalRoles.case_id);

  std::vector<Column> columns;
  Column case_col{kCanonicalRoles.case_id, ColumnType::String, {}};
  for (const auto& r : rows) case_col.values.emplace_back(r.case_id);
  columns.push_back(std::move(case_col));
  for (const auto& key : keys) {
    std::vector<Value> cells;
    cells.reserve(rows.size());
    for (const auto& r : rows) {
      auto it = r.attrs.find(key);
      cells.push_back(it == r.attrs.end() ? Value{} : it->second);
    }
    columns.push_back(unify_column(key, std::move(cells)));
  }
  return EventLog(std::move(columns), kCanonicalRoles);
}

EventLog import_xes(const std::filesystem::path& path) { return parse_xes(read_text_file(path)); }

std::string to_xes(const EventLog& log) {
  const auto& cols = log.columns();
  const auto& roles = log.roles();
  auto attr = [](ColumnType t, std::string_view key, const Value& v) {
    std::string text = t == ColumnType::Timestamp ? format_timestamp(std::get<Timestamp>(v)) + "Z"
                                                  : to_text(v);
    return "<" + std::string(xes_tag(t)) + " key=\"" + xml_escape(key) + "\" value=\"" +
           xml_escape(text) + "\"/>";
  };
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<log xes.version=\"1.0\" xmlns=\"http://www.xes-standard.org/\">\n";
  for (const auto& span : log.cases()) {
    out += "  <trace>\n";
    out += "    " + attr(ColumnType::String, "concept:name", Value{span.case_id}) + "\n";
    for (const auto& c : cols) {
      if (!c.name.starts_with("case:") || is_null(c.values[span.begin])) continue;
      out += "    " + attr(c.type, c.name.substr(5), c.values[span.begin]) + "\n";
    }
    for (std::size_t r = span.begin; r < span.end; ++r) {
      out += "    <event>\n";
      for (const auto& c : cols) {
        if (c.name == roles.case_id || c.name.starts_with("case:") || is_null(c.values[r]))
          continue;
        std::string_view key = c.name;
        if (c.name == roles.activity) key = "concept:name";
        else if (c.name == roles.timestamp) key = "time:timestamp";
        out += "      " + attr(c.type, key, c.values[r]) + "\n";
      }
      out += "    </event>\n";
    }
    out += "  </trace>\n";
  }
  out += "</log>\n";
  return out;
}

void export_xes(const EventLog& log, const std::filesystem::path& path) {
  write_text_file(path, to_xes(log));
}

Ocel parse_ocel_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("invalid JSON: ") + e.what(), "");
  }
  if (!doc.is_object()) throw Error(ErrorCode::SchemaViolation, "document is not an object", "");
  const auto& events_json = require(doc, "events", json::value_t::array, "");
  const auto& objects_json = require(doc, "objects", json::value_t::array, "");

  std::vector<OcelObject> objects;
  for (std::size_t i = 0; i < objects_json.size(); ++i) {
    const std::string path = "/objects/" + std::to_string(i);
    const auto& o = objects_json[i];
    if (!o.is_object()) throw Error(ErrorCode::SchemaViolation, "object is not a JSON object", path);
    OcelObject obj{require(o, "id", json::value_t::string, path).get<std::string>(),
                   require(o, "type", json::value_t::string, path).get<std::string>(), {}};
    if (auto it = o.find("attributes"); it != o.end()) {
      if (!it->is_array())
        throw Error(ErrorCode::SchemaViolation, "attributes must be a list", path + "/attributes");
      std::map<std::string, Timestamp> latest;
      for (std::size_t a = 0; a < it->size(); ++a) {
        const std::string apath = path + "/attributes/" + std::to_string(a);
        const auto& attr = (*it)[a];
        if (!attr.is_object() || !attr.contains("value"))
          throw Error(ErrorCode::SchemaViolation, "attribute needs name and value", apath);
        const auto name = require(attr, "name", json::value_t::string, apath).get<std::string>();
        Timestamp when{std::numeric_limits<std::int64_t>::min()};
        if (auto t = attr.find("time"); t != attr.end() && t->is_string())
          if (auto ts = parse_iso8601(t->get<std::string>())) when = *ts;
        // Time-varying attributes keep their most recent value.
        auto [pos, inserted] = latest.emplace(name, when);
        if (inserted || when >= pos->second) {
          pos->second = when;
          obj.attributes[name] = json_to_value(attr["value"]);
        }
      }
    }
    objects.push_back(std::move(obj));
  }

  std::vector<OcelEvent> events;
  std::vector<E2ORelation> relations;
  for (std::size_t i = 0; i < events_json.size(); ++i) {
    const std::string path = "/events/" + std::to_string(i);
    const auto& e = events_json[i];
    if (!e.is_object()) throw Error(ErrorCode::SchemaViolation, "event is not a JSON object", path);
    const auto time_text = require(e, "time", json::value_t::string, path).get<std::string>();
    auto time = parse_iso8601(time_text);
    if (!time) throw Error(ErrorCode::SchemaViolation, "bad time '" + time_text + "'", path + "/time");
    OcelEvent ev{require(e, "id", json::value_t::string, path).get<std::string>(),
                 require(e, "type", json::value_t::string, path).get<std::string>(), *time, {}};
    if (auto it = e.find("attributes"); it != e.end()) {
      if (!it->is_array())
        throw Error(ErrorCode::SchemaViolation, "attributes must be a list", path + "/attributes");
      for (std::size_t a = 0; a < it->size(); ++a) {
        const std::string apath = path + "/attributes/" + std::to_string(a);
        const auto& attr = (*it)[a];
        if (!attr.is_object() || !attr.contains("value"))
          throw Error(ErrorCode::SchemaViolation, "attribute needs name and value", apath);
        ev.attributes[require(attr, "name", json::value_t::string, apath).get<std::string>()] =
            json_to_value(attr["value"]);
      }
    }
    if (auto it = e.find("relationships"); it != e.end()) {
      if (!it->is_array())
        throw Error(ErrorCode::SchemaViolation, "relationships must be a list",
                    path + "/relationships");
      for (std::size_t r = 0; r < it->size(); ++r) {
        const std::string rpath = path + "/relationships/" + std::to_string(r);
        const auto& rel = (*it)[r];
        if (!rel.is_object()) throw Error(ErrorCode::SchemaViolation, "relationship is not an object", rpath);
        E2ORelation link{ev.id, require(rel, "objectId", json::value_t::string, rpath).get<std::string>(),
                         std::nullopt};
        if (auto q = rel.find("qualifier"); q != rel.end() && q->is_string())
          link.qualifier = q->get<std::string>();
        relations.push_back(std::move(link));
      }
    }
    events.push_back(std::move(ev));
  }
  return Ocel(std::move(events), std::move(objects), std::move(relations));
}

Ocel import_ocel_json(const std::filesystem::path& path) {
  return parse_ocel_json(read_text_file(path));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'", path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'", path.string());
}

}  // namespace pmllm
