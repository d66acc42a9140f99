#include "ordcif/error.hpp"

namespace ordcif {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonPositiveTime: return "NonPositiveTime";
    case Errc::CauseOutOfRange: return "CauseOutOfRange";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::BadK: return "BadK";
    case Errc::CensoringPresent: return "CensoringPresent";
    case Errc::BadCauseIndex: return "BadCauseIndex";
    case Errc::EmptyVector: return "EmptyVector";
    case Errc::AlreadyRestricted: return "AlreadyRestricted";
    case Errc::NotRestricted: return "NotRestricted";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::EmptyRiskSet: return "EmptyRiskSet";
    case Errc::BadQuery: return "BadQuery";
    case Errc::BadLevel: return "BadLevel";
    case Errc::BadJ: return "BadJ";
    case Errc::BadConfig: return "BadConfig";
    case Errc::NotNull: return "NotNull";
    case Errc::TieSetSingleton: return "TieSetSingleton";
    case Errc::BadStepFunction: return "BadStepFunction";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace ordcif
