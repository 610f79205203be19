#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace llm4tg {

/// Base class for every error raised by the library. Errors found while
/// reading a text document may carry a 1-based line and column, which are
/// also prefixed to the message as "line:column: ".
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  Error(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  bool has_position() const noexcept { return line_ != 0; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

#define LLM4TG_DEFINE_ERROR(Name, Base)   \
  class Name : public Base {              \
   public:                                \
    using Base::Base;                     \
  }

// graph construction and queries
LLM4TG_DEFINE_ERROR(GraphError, Error);
LLM4TG_DEFINE_ERROR(BipartiteViolation, GraphError);
LLM4TG_DEFINE_ERROR(DisconnectedNode, GraphError);
LLM4TG_DEFINE_ERROR(RootNotAddress, GraphError);
LLM4TG_DEFINE_ERROR(HopBoundExceeded, GraphError);
LLM4TG_DEFINE_ERROR(UnknownNode, GraphError);
LLM4TG_DEFINE_ERROR(DuplicateNode, GraphError);
LLM4TG_DEFINE_ERROR(InvalidEdge, GraphError);
LLM4TG_DEFINE_ERROR(WrongNodeType, GraphError);

// text and file formats
LLM4TG_DEFINE_ERROR(FormatError, Error);
LLM4TG_DEFINE_ERROR(MissingAttribute, FormatError);
LLM4TG_DEFINE_ERROR(LayerCountMismatch, FormatError);
LLM4TG_DEFINE_ERROR(LayerMismatch, FormatError);
LLM4TG_DEFINE_ERROR(DanglingNodeReference, FormatError);
LLM4TG_DEFINE_ERROR(RootAbsent, Error);
LLM4TG_DEFINE_ERROR(EmptyInput, Error);

/// LLM4TG syntax error; always carries a position.
class SyntaxError : public FormatError {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column) : FormatError(what, line, column) {}
};

// sampling
LLM4TG_DEFINE_ERROR(SingleNodeGraph, Error);
LLM4TG_DEFINE_ERROR(ZeroImportance, Error);

// features
LLM4TG_DEFINE_ERROR(MissingTimestamps, Error);

// tokenizer
LLM4TG_DEFINE_ERROR(UnknownEncoding, Error);
LLM4TG_DEFINE_ERROR(EncodingDataError, Error);
LLM4TG_DEFINE_ERROR(UnknownModel, Error);

// evaluation harness
LLM4TG_DEFINE_ERROR(UnknownNodeInQuestion, Error);
LLM4TG_DEFINE_ERROR(BudgetExceeded, Error);
LLM4TG_DEFINE_ERROR(MixedMode, Error);
LLM4TG_DEFINE_ERROR(NoParsableLabels, Error);
LLM4TG_DEFINE_ERROR(LengthMismatch, Error);
LLM4TG_DEFINE_ERROR(ManifestError, Error);

LLM4TG_DEFINE_ERROR(EndpointError, Error);
LLM4TG_DEFINE_ERROR(AuthError, EndpointError);
LLM4TG_DEFINE_ERROR(TimeoutError, EndpointError);
LLM4TG_DEFINE_ERROR(RateLimited, EndpointError);
LLM4TG_DEFINE_ERROR(TransportError, EndpointError);

#undef LLM4TG_DEFINE_ERROR

}  // namespace llm4tg
