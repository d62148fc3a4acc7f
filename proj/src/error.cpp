#include "pmllm/error.hpp"

namespace pmllm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::TimestampParse: return "TimestampParse";
    case ErrorCode::EmptyLog: return "EmptyLog";
    case ErrorCode::XmlParse: return "XmlParse";
    case ErrorCode::MissingStandardAttribute: return "MissingStandardAttribute";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::UnknownCase: return "UnknownCase";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyOcel: return "EmptyOcel";
    case ErrorCode::NonBipartiteArc: return "NonBipartiteArc";
    case ErrorCode::SqlParse: return "SqlParse";
    case ErrorCode::NonSelectStatement: return "NonSelectStatement";
    case ErrorCode::UnknownTableOrColumn: return "UnknownTableOrColumn";
    case ErrorCode::ExecutionError: return "ExecutionError";
    case ErrorCode::NoSqlFound: return "NoSqlFound";
    case ErrorCode::AuthMissing: return "AuthMissing";
    case ErrorCode::HttpStatus: return "HttpStatus";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::UnsupportedImage: return "UnsupportedImage";
    case ErrorCode::RendererUnavailable: return "RendererUnavailable";
    case ErrorCode::MalformedHypotheses: return "MalformedHypotheses";
    case ErrorCode::MalformedVerdicts: return "MalformedVerdicts";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace pmllm
