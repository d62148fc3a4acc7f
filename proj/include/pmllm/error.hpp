#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmllm {

enum class ErrorCode {
  // event-log-core
  MissingColumn,
  TimestampParse,
  EmptyLog,
  XmlParse,
  MissingStandardAttribute,
  IoError,
  SchemaViolation,
  DanglingReference,
  UnknownCase,
  InvalidArgument,
  // artifact-discovery
  EmptyOcel,
  NonBipartiteArc,
  // query-engine
  SqlParse,
  NonSelectStatement,
  UnknownTableOrColumn,
  ExecutionError,
  NoSqlFound,
  // llm-bridge
  AuthMissing,
  HttpStatus,
  Timeout,
  Transport,
  MalformedResponse,
  UnsupportedImage,
  RendererUnavailable,
  MalformedHypotheses,
  MalformedVerdicts,
  // configuration
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `subject()` carries the offending
/// name, id, path or value when the error has one (e.g. the missing column).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string subject = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        subject_(std::move(subject)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace pmllm
