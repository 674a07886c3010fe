#include "afhe/error.hpp"

namespace afhe {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyLog:
      return "EmptyLog";
    case Errc::UnsortedEvents:
      return "UnsortedEvents";
    case Errc::InvalidWindow:
      return "InvalidWindow";
    case Errc::DomainError:
      return "DomainError";
    case Errc::DegenerateCost:
      return "DegenerateCost";
    case Errc::InvalidThresholds:
      return "InvalidThresholds";
    case Errc::InvalidConfig:
      return "InvalidConfig";
    case Errc::IllegalTransition:
      return "IllegalTransition";
    case Errc::UnknownScenario:
      return "UnknownScenario";
    case Errc::MissingField:
      return "MissingField";
    case Errc::InvalidEnum:
      return "InvalidEnum";
    case Errc::InvalidField:
      return "InvalidField";
    case Errc::SyntaxError:
      return "SyntaxError";
    case Errc::IoError:
      return "IoError";
    case Errc::CorruptSegment:
      return "CorruptSegment";
  }
  return "Unknown";
}

}  // namespace afhe
