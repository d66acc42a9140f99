#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ordcif {

enum class Errc {
  NonPositiveTime,
  CauseOutOfRange,
  EmptyInput,
  BadK,
  CensoringPresent,
  BadCauseIndex,
  EmptyVector,
  AlreadyRestricted,
  NotRestricted,
  OutOfRange,
  EmptyRiskSet,
  BadQuery,
  BadLevel,
  BadJ,
  BadConfig,
  NotNull,
  TieSetSingleton,
  BadStepFunction,
  ParseError,
};

std::string_view to_string(Errc code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it to a diagnostic and exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ordcif
