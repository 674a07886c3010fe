#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "afhe/event.hpp"

namespace afhe {

// Wire format: one self-describing JSON object per line, UTF-8, LF line
// endings. Required keys: task_id, timestamp, decider, phase. Canonical
// rendering is compact JSON with keys in alphabetical order, so canonical
// records are byte-reproducible. Unknown keys round-trip unchanged.

// Renders the canonical line (no trailing newline). Validates the event
// first; never emits an invalid record.
std::string serialize_event(const DecisionEvent& event);

// Parses and validates one record line. Errors carry the 1-based
// line_number and, where applicable, the offending key.
DecisionEvent parse_event_line(std::string_view line,
                               std::size_t line_number = 1);

struct LineRejection {
  std::size_t line = 0;
  Errc code = Errc::SyntaxError;
  std::string field;
  std::string message;
};

struct BatchParse {
  std::vector<DecisionEvent> events;    // valid records, input order
  std::vector<LineRejection> rejected;  // invalid lines with context
  std::size_t line_count = 0;           // non-blank lines seen
};

// Per-line parse of a whole batch; a bad line never poisons its neighbors.
// Blank lines are skipped but still advance line numbering.
BatchParse parse_event_lines(std::string_view text);

// Strict variant: throws on the first invalid line.
std::vector<DecisionEvent> parse_event_log(std::string_view text);

// Canonical multi-line rendering, one record per line, trailing LF.
std::string serialize_events(std::span<const DecisionEvent> events);

}  // namespace afhe
