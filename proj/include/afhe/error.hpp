#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace afhe {

// Stable error codes. CLI maps every Error to exit code 2; the HTTP service
// maps parse-class codes to 400 and IoError/CorruptSegment to 500.
enum class Errc {
  EmptyLog,
  UnsortedEvents,
  InvalidWindow,
  DomainError,
  DegenerateCost,
  InvalidThresholds,
  InvalidConfig,
  IllegalTransition,
  UnknownScenario,
  MissingField,
  InvalidEnum,
  InvalidField,
  SyntaxError,
  IoError,
  CorruptSegment,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Errc code() const noexcept { return code_; }

  // 1-based input line for parse errors, absent otherwise.
  const std::optional<std::size_t>& line() const noexcept { return line_; }
  const std::optional<std::string>& field() const noexcept { return field_; }

  Error& with_line(std::size_t line) {
    line_ = line;
    return *this;
  }
  Error& with_field(std::string field) {
    field_ = std::move(field);
    return *this;
  }

 private:
  Errc code_;
  std::optional<std::size_t> line_;
  std::optional<std::string> field_;
};

}  // namespace afhe
