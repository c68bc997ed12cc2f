#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace litnet {

enum class ErrorCode {
  UnreadablePdf,
  EmptyDocument,
  AmbiguousMatch,
  RuleCompileError,
  NoFindingsText,
  TaggerUnavailable,
  UnknownVerb,
  InvalidCategory,
  UnknownWord,
  UnknownPair,
  EmptyGraph,
  LayoutMissing,
  MissingPriorStage,
  ConfigError,
  IoError,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports carries one of the codes above so that
// callers (CLI exit codes, HTTP status mapping) can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace litnet
