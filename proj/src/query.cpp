#include "pmllm/query.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <mutex>
#include <set>

#include "pmllm/error.hpp"
#include "pmllm/log_io.hpp"
#include "pmllm/prompt_templates.hpp"

namespace pmllm {
namespace {

using Clock = std::chrono::steady_clock;

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

struct Token {
  enum Kind { Word, Quoted, Symbol } kind;
  std::string text;
};

// Splits SQL into tokens, skipping comments and keeping string literals and
// quoted identifiers whole. Statements are separated by Symbol ";" tokens.
std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = sql.size();
  while (i < n) {
    const char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
      while (i < n && sql[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
      const auto end = sql.find("*/", i + 2);
      if (end == std::string_view::npos) throw Error(ErrorCode::SqlParse, "unterminated comment");
      i = end + 2;
    } else if (c == '\'' || c == '"' || c == '`' || c == '[') {
      const char close = c == '[' ? ']' : c;
      std::size_t j = i + 1;
      for (;;) {
        if (j >= n) throw Error(ErrorCode::SqlParse, "unterminated quoted text");
        if (sql[j] == close) {
          if (close != ']' && j + 1 < n && sql[j + 1] == close) {
            j += 2;
            continue;
          }
          break;
        }
        ++j;
      }
      out.push_back({Token::Quoted, std::string(sql.substr(i, j - i + 1))});
      i = j + 1;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
               static_cast<unsigned char>(c) >= 0x80) {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(sql[j])) || sql[j] == '_' ||
                       sql[j] == '$' || static_cast<unsigned char>(sql[j]) >= 0x80))
        ++j;
      out.push_back({Token::Word, std::string(sql.substr(i, j - i))});
      i = j;
    } else {
      out.push_back({Token::Symbol, std::string(1, c)});
      ++i;
    }
  }
  return out;
}

std::string quote_ident(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string_view sql_type(ColumnType t) {
  switch (t) {
    case ColumnType::String: return "TEXT";
    case ColumnType::Integer: return "INTEGER";
    case ColumnType::Float: return "REAL";
    case ColumnType::Timestamp: return "TIMESTAMP";
    case ColumnType::Boolean: return "BOOLEAN";
  }
  return "TEXT";
}

std::optional<Timestamp> sqlite_timestamp(sqlite3_value* v) {
  switch (sqlite3_value_type(v)) {
    case SQLITE_TEXT: {
      const auto* text = reinterpret_cast<const char*>(sqlite3_value_text(v));
      return parse_iso8601(text);
    }
    case SQLITE_INTEGER: return Timestamp::from_seconds(sqlite3_value_int64(v));
    case SQLITE_FLOAT: return Timestamp{static_cast<std::int64_t>(std::llround(sqlite3_value_double(v) * 1e6))};
    default: return std::nullopt;
  }
}

// epoch(ts): seconds since 1970-01-01 as a float.
void sql_epoch(sqlite3_context* ctx, int, sqlite3_value** argv) {
  auto ts = sqlite_timestamp(argv[0]);
  if (!ts) return sqlite3_result_null(ctx);
  sqlite3_result_double(ctx, static_cast<double>(ts->micros) / 1e6);
}

// date_diff(part, start, end): whole units from start to end, truncated toward zero.
void sql_date_diff(sqlite3_context* ctx, int, sqlite3_value** argv) {
  if (sqlite3_value_type(argv[0]) != SQLITE_TEXT) return sqlite3_result_null(ctx);
  const std::string part = upper(reinterpret_cast<const char*>(sqlite3_value_text(argv[0])));
  auto start = sqlite_timestamp(argv[1]);
  auto end = sqlite_timestamp(argv[2]);
  if (!start || !end) return sqlite3_result_null(ctx);
  std::int64_t unit = 0;
  if (part == "SECOND" || part == "SECONDS") unit = 1'000'000;
  else if (part == "MINUTE" || part == "MINUTES") unit = 60'000'000;
  else if (part == "HOUR" || part == "HOURS") unit = 3'600'000'000;
  else if (part == "DAY" || part == "DAYS") unit = 86'400'000'000;
  else if (part == "MILLISECOND" || part == "MILLISECONDS") unit = 1'000;
  else if (part == "MICROSECOND" || part == "MICROSECONDS") unit = 1;
  else return sqlite3_result_error(ctx, "date_diff: unsupported part", -1);
  sqlite3_result_int64(ctx, (end->micros - start->micros) / unit);
}

struct Deadline {
  Clock::time_point until;
  bool expired = false;
};

int progress_check(void* p) {
  auto* d = static_cast<Deadline*>(p);
  if (Clock::now() > d->until) {
    d->expired = true;
    return 1;
  }
  return 0;
}

struct StatementCloser {
  void operator()(sqlite3_stmt* s) const { sqlite3_finalize(s); }
};
using Statement = std::unique_ptr<sqlite3_stmt, StatementCloser>;

ColumnType widen(std::optional<ColumnType> current, ColumnType next) {
  if (!current || *current == next) return next;
  if ((*current == ColumnType::Integer && next == ColumnType::Float) ||
      (*current == ColumnType::Float && next == ColumnType::Integer))
    return ColumnType::Float;
  return ColumnType::String;
}

}  // namespace

const SchemaTable* SchemaDescription::find_table(std::string_view name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

std::string SchemaDescription::render() const {
  std::string out;
  for (const auto& t : tables) {
    out += "Table " + t.name + " (" + std::to_string(t.row_count) + " rows):\n";
    for (const auto& c : t.columns) {
      out += "  - " + c.name + " (" + std::string(to_string(c.type)) + ")";
      if (!c.annotation.empty()) out += ": " + c.annotation;
      out += "\n";
    }
  }
  if (!join_keys.empty()) {
    out += "Join keys:\n";
    for (const auto& k : join_keys) out += "  - " + k + "\n";
  }
  return out;
}

SchemaDescription describe_schema(const EventLog& log) {
  SchemaDescription s;
  SchemaTable t{"event_log", log.num_events(), {}};
  const auto& roles = log.roles();
  for (const auto& c : log.columns()) {
    std::string note;
    if (c.name == roles.case_id) note = "case identifier";
    else if (c.name == roles.activity) note = "activity name";
    else if (c.name == roles.timestamp) note = "event timestamp (UTC)";
    t.columns.push_back({c.name, c.type, note});
  }
  s.tables.push_back(std::move(t));
  s.dialect_note = PromptTemplates::builtin().get("dialect.note");
  return s;
}

namespace {

// Columns of the OCEL tables as the engine stores them.
struct OcelTables {
  std::vector<Column> events;
  std::vector<Column> objects;
  std::vector<Column> e2o;
};

template <typename Row>
void add_attribute_columns(std::vector<Column>& cols, const std::vector<Row>& rows,
                           const std::set<std::string>& reserved) {
  std::set<std::string> names;
  for (const auto& r : rows)
    for (const auto& [k, _] : r.attributes) names.insert(k);
  for (const auto& name : names) {
    std::vector<Value> cells;
    cells.reserve(rows.size());
    for (const auto& r : rows) {
      auto it = r.attributes.find(name);
      cells.push_back(it == r.attributes.end() ? Value{} : it->second);
    }
    cols.push_back(unify_column(reserved.contains(name) ? "attr_" + name : name, std::move(cells)));
  }
}

OcelTables ocel_tables(const Ocel& ocel) {
  OcelTables t;
  Column id{"id", ColumnType::String, {}}, act{"activity", ColumnType::String, {}},
      ts{"timestamp", ColumnType::Timestamp, {}};
  for (const auto& e : ocel.events()) {
    id.values.emplace_back(e.id);
    act.values.emplace_back(e.activity);
    ts.values.emplace_back(e.time);
  }
  t.events = {std::move(id), std::move(act), std::move(ts)};
  add_attribute_columns(t.events, ocel.events(), {"id", "activity", "timestamp"});

  Column oid{"id", ColumnType::String, {}}, type{"type", ColumnType::String, {}};
  for (const auto& o : ocel.objects()) {
    oid.values.emplace_back(o.id);
    type.values.emplace_back(o.type);
  }
  t.objects = {std::move(oid), std::move(type)};
  add_attribute_columns(t.objects, ocel.objects(), {"id", "type"});

  Column ev{"event_id", ColumnType::String, {}}, ob{"object_id", ColumnType::String, {}},
      q{"qualifier", ColumnType::String, {}};
  for (const auto& r : ocel.relations()) {
    ev.values.emplace_back(r.event_id);
    ob.values.emplace_back(r.object_id);
    q.values.push_back(r.qualifier ? Value{*r.qualifier} : Value{});
  }
  t.e2o = {std::move(ev), std::move(ob), std::move(q)};
  return t;
}

}  // namespace

SchemaDescription describe_schema(const Ocel& ocel) {
  const auto t = ocel_tables(ocel);
  const std::map<std::string, std::string> notes{
      {"events.id", "event identifier"},
      {"events.activity", "activity name"},
      {"events.timestamp", "event timestamp (UTC)"},
      {"objects.id", "object identifier"},
      {"objects.type", "object type"},
      {"e2o.event_id", "references events.id"},
      {"e2o.object_id", "references objects.id"},
      {"e2o.qualifier", "role of the object in the event (may be null)"},
  };
  SchemaDescription s;
  auto add = [&](const std::string& name, const std::vector<Column>& cols) {
    SchemaTable table{name, cols.empty() ? 0 : cols.front().values.size(), {}};
    for (const auto& c : cols) {
      auto it = notes.find(name + "." + c.name);
      table.columns.push_back({c.name, c.type, it == notes.end() ? "" : it->second});
    }
    s.tables.push_back(std::move(table));
  };
  add("events", t.events);
  add("objects", t.objects);
  add("e2o", t.e2o);
  s.join_keys = {"e2o.event_id = events.id", "e2o.object_id = objects.id"};
  s.dialect_note = PromptTemplates::builtin().get("dialect.note");
  return s;
}

std::string QueryResult::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += csv_escape(columns[c].name);
  }
  out += "\r\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += csv_escape(to_text(row[c]));
    }
    out += "\r\n";
  }
  return out;
}

std::string QueryResult::to_text_table(std::size_t max_rows) const {
  const std::size_t shown = std::min(max_rows, rows.size());
  std::vector<std::size_t> widths(columns.size());
  std::vector<std::vector<std::string>> cells(shown);
  for (std::size_t c = 0; c < columns.size(); ++c) widths[c] = columns[c].name.size();
  for (std::size_t r = 0; r < shown; ++r)
    for (std::size_t c = 0; c < columns.size(); ++c) {
      auto text = is_null(rows[r][c]) ? std::string("NULL") : to_text(rows[r][c]);
      widths[c] = std::max(widths[c], text.size());
      cells[r].push_back(std::move(text));
    }
  auto line = [&](const std::vector<std::string>& vals) {
    std::string out;
    for (std::size_t c = 0; c < vals.size(); ++c) {
      out += c ? " | " : "";
      out += vals[c] + std::string(widths[c] - vals[c].size(), ' ');
    }
    while (out.ends_with(' ')) out.pop_back();
    return out + "\n";
  };
  std::vector<std::string> header;
  for (const auto& c : columns) header.push_back(c.name);
  std::string out = line(header);
  std::string sep;
  for (std::size_t c = 0; c < widths.size(); ++c) sep += (c ? "-+-" : "") + std::string(widths[c], '-');
  out += sep + "\n";
  for (const auto& r : cells) out += line(r);
  if (shown < rows.size()) out += "... (" + std::to_string(rows.size() - shown) + " more rows)\n";
  out += "(" + std::to_string(row_count) + (row_count == 1 ? " row)\n" : " rows)\n");
  return out;
}

void check_select_only(std::string_view sql) {
  static const std::set<std::string> kForbidden{
      "INSERT", "UPDATE", "DELETE", "DROP",   "CREATE", "ALTER",    "ATTACH", "DETACH", "PRAGMA",
      "VACUUM", "REINDEX", "BEGIN", "COMMIT", "ROLLBACK", "TRUNCATE", "GRANT",  "REVOKE", "COPY",
      "EXPORT", "IMPORT", "INSTALL", "LOAD",  "SET",    "CALL",     "MERGE",  "UPSERT"};
  const auto tokens = tokenize(sql);
  std::vector<std::vector<const Token*>> statements(1);
  for (const auto& t : tokens) {
    if (t.kind == Token::Symbol && t.text == ";") statements.emplace_back();
    else statements.back().push_back(&t);
  }
  std::erase_if(statements, [](const auto& s) { return s.empty(); });
  if (statements.empty()) throw Error(ErrorCode::SqlParse, "empty SQL statement");
  if (statements.size() > 1)
    throw Error(ErrorCode::NonSelectStatement, "only a single statement is accepted");

  const auto& stmt = statements.front();
  const Token* first = nullptr;
  for (const auto* t : stmt)
    if (!(t->kind == Token::Symbol && t->text == "(")) {
      first = t;
      break;
    }
  const std::string head = first && first->kind == Token::Word ? upper(first->text) : "";
  if (head != "SELECT" && head != "WITH")
    throw Error(ErrorCode::NonSelectStatement,
                "statement must start with SELECT or WITH, found '" + (first ? first->text : "") + "'",
                first ? first->text : "");
  for (std::size_t i = 0; i < stmt.size(); ++i) {
    if (stmt[i]->kind != Token::Word) continue;
    const auto word = upper(stmt[i]->text);
    if (kForbidden.contains(word))
      throw Error(ErrorCode::NonSelectStatement, "keyword " + word + " is not allowed", word);
    // REPLACE is allowed only as the string function replace(...).
    if (word == "REPLACE" && !(i + 1 < stmt.size() && stmt[i + 1]->text == "("))
      throw Error(ErrorCode::NonSelectStatement, "keyword REPLACE is not allowed", word);
  }
}

struct SqlSession::Impl {
  sqlite3* db = nullptr;
  SchemaDescription schema;
  mutable std::mutex mutex;
  mutable std::atomic<std::size_t> dispatched{0};

  Impl() {
    if (sqlite3_open_v2(":memory:", &db, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_NOMUTEX,
                        nullptr) != SQLITE_OK)
      throw Error(ErrorCode::ExecutionError, "cannot open in-memory database");
    sqlite3_create_function_v2(db, "epoch", 1, SQLITE_UTF8 | SQLITE_DETERMINISTIC, nullptr, sql_epoch,
                               nullptr, nullptr, nullptr);
    for (const char* name : {"date_diff", "datediff"})
      sqlite3_create_function_v2(db, name, 3, SQLITE_UTF8 | SQLITE_DETERMINISTIC, nullptr,
                                 sql_date_diff, nullptr, nullptr, nullptr);
  }
  ~Impl() { sqlite3_close_v2(db); }

  void exec(const std::string& sql) {
    char* err = nullptr;
    if (sqlite3_exec(db, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown error";
      sqlite3_free(err);
      throw Error(ErrorCode::ExecutionError, msg);
    }
  }

  void load(const std::string& table, const std::vector<Column>& cols) {
    std::string ddl = "CREATE TABLE " + quote_ident(table) + " (";
    std::string insert = "INSERT INTO " + quote_ident(table) + " VALUES (";
    for (std::size_t c = 0; c < cols.size(); ++c) {
      ddl += (c ? ", " : "") + quote_ident(cols[c].name) + " " + std::string(sql_type(cols[c].type));
      insert += c ? ", ?" : "?";
    }
    exec(ddl + ")");
    sqlite3_stmt* raw = nullptr;
    if (sqlite3_prepare_v2(db, (insert + ")").c_str(), -1, &raw, nullptr) != SQLITE_OK)
      throw Error(ErrorCode::ExecutionError, sqlite3_errmsg(db));
    Statement stmt{raw};
    const std::size_t rows = cols.empty() ? 0 : cols.front().values.size();
    for (std::size_t r = 0; r < rows; ++r) {
      sqlite3_reset(raw);
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const int idx = static_cast<int>(c) + 1;
        const auto& v = cols[c].values[r];
        if (auto* s = std::get_if<std::string>(&v))
          sqlite3_bind_text(raw, idx, s->data(), static_cast<int>(s->size()), SQLITE_TRANSIENT);
        else if (auto* i = std::get_if<std::int64_t>(&v)) sqlite3_bind_int64(raw, idx, *i);
        else if (auto* d = std::get_if<double>(&v)) sqlite3_bind_double(raw, idx, *d);
        else if (auto* t = std::get_if<Timestamp>(&v)) {
          const auto text = format_timestamp_sql(*t);
          sqlite3_bind_text(raw, idx, text.data(), static_cast<int>(text.size()), SQLITE_TRANSIENT);
        } else if (auto* b = std::get_if<bool>(&v)) sqlite3_bind_int(raw, idx, *b ? 1 : 0);
        else sqlite3_bind_null(raw, idx);
      }
      if (sqlite3_step(raw) != SQLITE_DONE) throw Error(ErrorCode::ExecutionError, sqlite3_errmsg(db));
    }
  }

  void seal() { exec("PRAGMA query_only = ON"); }
};

SqlSession::SqlSession(const EventLog& log) : impl_(std::make_unique<Impl>()) {
  impl_->exec("BEGIN");
  impl_->load("event_log", log.columns());
  impl_->exec("COMMIT");
  impl_->seal();
  impl_->schema = describe_schema(log);
}

SqlSession::SqlSession(const Ocel& ocel) : impl_(std::make_unique<Impl>()) {
  const auto t = ocel_tables(ocel);
  impl_->exec("BEGIN");
  impl_->load("events", t.events);
  impl_->load("objects", t.objects);
  impl_->load("e2o", t.e2o);
  impl_->exec("COMMIT");
  impl_->seal();
  impl_->schema = describe_schema(ocel);
}

SqlSession::~SqlSession() = default;
SqlSession::SqlSession(SqlSession&&) noexcept = default;
SqlSession& SqlSession::operator=(SqlSession&&) noexcept = default;

const SchemaDescription& SqlSession::schema() const { return impl_->schema; }

std::size_t SqlSession::dispatched() const { return impl_->dispatched.load(); }

QueryResult SqlSession::execute(std::string_view sql, std::chrono::milliseconds timeout) const {
  check_select_only(sql);
  std::lock_guard lock(impl_->mutex);
  ++impl_->dispatched;
  sqlite3* db = impl_->db;
  const auto started = Clock::now();

  sqlite3_stmt* raw = nullptr;
  const std::string text(sql);
  if (sqlite3_prepare_v2(db, text.c_str(), static_cast<int>(text.size()), &raw, nullptr) != SQLITE_OK) {
    const std::string msg = sqlite3_errmsg(db);
    if (msg.find("no such table") != std::string::npos || msg.find("no such column") != std::string::npos)
      throw Error(ErrorCode::UnknownTableOrColumn, msg);
    throw Error(ErrorCode::SqlParse, msg);
  }
  Statement stmt{raw};
  if (!raw) throw Error(ErrorCode::SqlParse, "empty SQL statement");
  if (!sqlite3_stmt_readonly(raw)) throw Error(ErrorCode::NonSelectStatement, "statement is not read-only");

  Deadline deadline{started + timeout};
  sqlite3_progress_handler(db, 1000, progress_check, &deadline);
  struct ClearHandler {
    sqlite3* db;
    ~ClearHandler() { sqlite3_progress_handler(db, 0, nullptr, nullptr); }
  } clear{db};

  const int ncols = sqlite3_column_count(raw);
  QueryResult result;
  std::vector<std::optional<ColumnType>> types(static_cast<std::size_t>(ncols));
  std::vector<std::string> decls(static_cast<std::size_t>(ncols));
  for (int c = 0; c < ncols; ++c) {
    const char* decl = sqlite3_column_decltype(raw, c);
    decls[static_cast<std::size_t>(c)] = decl ? upper(decl) : "";
    if (decls[static_cast<std::size_t>(c)] == "TIMESTAMP") types[static_cast<std::size_t>(c)] = ColumnType::Timestamp;
    else if (decls[static_cast<std::size_t>(c)] == "BOOLEAN") types[static_cast<std::size_t>(c)] = ColumnType::Boolean;
  }

  for (;;) {
    const int rc = sqlite3_step(raw);
    if (rc == SQLITE_DONE) break;
    if (rc != SQLITE_ROW) {
      if (deadline.expired) throw Error(ErrorCode::ExecutionError, "timeout", "timeout");
      throw Error(ErrorCode::ExecutionError, sqlite3_errmsg(db));
    }
    std::vector<Value> row;
    row.reserve(static_cast<std::size_t>(ncols));
    for (int c = 0; c < ncols; ++c) {
      const auto ci = static_cast<std::size_t>(c);
      const int kind = sqlite3_column_type(raw, c);
      if (kind == SQLITE_NULL) {
        row.emplace_back();
        continue;
      }
      if (decls[ci] == "TIMESTAMP" && kind == SQLITE_TEXT) {
        const auto* s = reinterpret_cast<const char*>(sqlite3_column_text(raw, c));
        if (auto ts = parse_iso8601(s)) {
          row.emplace_back(*ts);
          continue;
        }
      }
      if (decls[ci] == "BOOLEAN" && kind == SQLITE_INTEGER) {
        row.emplace_back(sqlite3_column_int64(raw, c) != 0);
        continue;
      }
      switch (kind) {
        case SQLITE_INTEGER:
          row.emplace_back(static_cast<std::int64_t>(sqlite3_column_int64(raw, c)));
          types[ci] = widen(types[ci], ColumnType::Integer);
          break;
        case SQLITE_FLOAT:
          row.emplace_back(sqlite3_column_double(raw, c));
          types[ci] = widen(types[ci], ColumnType::Float);
          break;
        default: {
          const auto* s = reinterpret_cast<const char*>(sqlite3_column_text(raw, c));
          row.emplace_back(std::string(s ? s : "", static_cast<std::size_t>(sqlite3_column_bytes(raw, c))));
          types[ci] = widen(types[ci], ColumnType::String);
        }
      }
    }
    result.rows.push_back(std::move(row));
  }

  for (int c = 0; c < ncols; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    const ColumnType type = types[ci].value_or(ColumnType::String);
    result.columns.push_back({sqlite3_column_name(raw, c), type});
    for (auto& row : result.rows) {
      auto& v = row[ci];
      if (is_null(v)) continue;
      if (type == ColumnType::Float) {
        if (auto* i = std::get_if<std::int64_t>(&v)) v = static_cast<double>(*i);
      } else if (type == ColumnType::String && !std::holds_alternative<std::string>(v)) {
        v = to_text(v);
      }
    }
  }
  result.row_count = result.rows.size();
  result.elapsed = Clock::now() - started;
  return result;
}

QueryResult execute_sql(const EventLog& log, std::string_view sql) {
  check_select_only(sql);
  return SqlSession(log).execute(sql);
}

QueryResult execute_sql(const Ocel& ocel, std::string_view sql) {
  check_select_only(sql);
  return SqlSession(ocel).execute(sql);
}

std::string build_nl2sql_prompt(const SchemaDescription& schema, std::string_view question,
                                std::optional<std::string_view> domain_knowledge) {
  if (trim(question).empty()) throw Error(ErrorCode::InvalidArgument, "question must not be empty");
  const auto& t = PromptTemplates::builtin();
  std::string out = t.get("nl2sql.intro") + "\n\n";
  out += t.get("nl2sql.schema_title") + "\n" + schema.render() + "\n";
  out += t.get("nl2sql.dialect_title") + "\n" + schema.dialect_note + "\n\n";
  if (domain_knowledge && !trim(*domain_knowledge).empty())
    out += t.get("nl2sql.knowledge_title") + "\n" + std::string(*domain_knowledge) + "\n\n";
  out += t.get("nl2sql.question_title") + "\n" + std::string(question) + "\n\n";
  out += t.get("nl2sql.instruction") + "\n";
  return out;
}

std::string parse_sql_from_response(std::string_view response) {
  std::string sql;
  if (const auto open = response.find("```"); open != std::string_view::npos) {
    auto body_start = response.find('\n', open);
    body_start = body_start == std::string_view::npos ? response.size() : body_start + 1;
    const auto close = response.find("```", body_start);
    sql = std::string(response.substr(body_start, close == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : close - body_start));
  } else {
    const auto up = upper(response);
    std::size_t pos = 0;
    for (;;) {
      pos = up.find("SELECT", pos);
      if (pos == std::string::npos) break;
      const bool left_ok = pos == 0 || !(std::isalnum(static_cast<unsigned char>(up[pos - 1])) || up[pos - 1] == '_');
      const auto after = pos + 6;
      const bool right_ok = after >= up.size() || !(std::isalnum(static_cast<unsigned char>(up[after])) || up[after] == '_');
      if (left_ok && right_ok) break;
      pos = after;
    }
    if (pos != std::string::npos) sql = std::string(response.substr(pos));
  }
  sql = trim(sql);
  while (!sql.empty() && (sql.back() == ';' || std::isspace(static_cast<unsigned char>(sql.back()))))
    sql.pop_back();
  if (sql.empty()) throw Error(ErrorCode::NoSqlFound, "response contains no SQL");
  return sql;
}

}  // namespace pmllm
