#include "afhe/event_ingest.hpp"

#include <json.hpp>

namespace afhe {

namespace {

using nlohmann::json;

const char* const kKnownKeys[] = {
    "ai_confidence", "ai_decision", "decider",   "human_decision",
    "human_role",    "phase",       "reviewed_async", "task_id",
    "timestamp",
};

bool is_known_key(const std::string& key) {
  for (const char* k : kKnownKeys) {
    if (key == k) return true;
  }
  return false;
}

Error missing(const char* key, std::size_t line) {
  return Error(Errc::MissingField,
               std::string("missing required key \"") + key + "\"")
      .with_field(key)
      .with_line(line);
}

const json& require_key(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw missing(key, line);
  return *it;
}

std::string require_string(const json& obj, const char* key,
                           std::size_t line) {
  const json& v = require_key(obj, key, line);
  if (!v.is_string()) {
    throw Error(Errc::InvalidField,
                std::string("key \"") + key + "\" must be a string")
        .with_field(key)
        .with_line(line);
  }
  return v.get<std::string>();
}

}  // namespace

DecisionEvent parse_event_line(std::string_view line,
                               std::size_t line_number) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) {
    throw Error(Errc::SyntaxError, "line is not valid JSON")
        .with_line(line_number);
  }
  if (!obj.is_object()) {
    throw Error(Errc::SyntaxError, "record must be a JSON object")
        .with_line(line_number);
  }

  DecisionEvent event;
  event.task_id = require_string(obj, "task_id", line_number);

  {
    const json& ts = require_key(obj, "timestamp", line_number);
    if (!ts.is_number_integer() && !ts.is_number_unsigned()) {
      throw Error(Errc::InvalidField,
                  "key \"timestamp\" must be an integer millisecond count")
          .with_field("timestamp")
          .with_line(line_number);
    }
    event.timestamp = ts.get<std::int64_t>();
  }

  {
    const std::string token = require_string(obj, "decider", line_number);
    auto decider = parse_decider_token(token);
    if (!decider) {
      throw Error(Errc::InvalidEnum, "unknown decider token \"" + token +
                                         "\" (expected ai_alone, "
                                         "ai_with_sync_human or human_only)")
          .with_field("decider")
          .with_line(line_number);
    }
    event.decider = *decider;
  }

  {
    const std::string token = require_string(obj, "phase", line_number);
    auto phase = parse_phase_token(token);
    if (!phase) {
      throw Error(Errc::InvalidEnum,
                  "unknown phase token \"" + token +
                      "\" (expected offline, shadow or operational)")
          .with_field("phase")
          .with_line(line_number);
    }
    event.phase = *phase;
  }

  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& key = it.key();
    const json& value = it.value();
    if (key == "task_id" || key == "timestamp" || key == "decider" ||
        key == "phase") {
      continue;
    }
    if (key == "ai_confidence") {
      if (!value.is_number()) {
        throw Error(Errc::InvalidField, "key \"ai_confidence\" must be a number")
            .with_field(key)
            .with_line(line_number);
      }
      event.ai_confidence = value.get<double>();
    } else if (key == "ai_decision") {
      if (!value.is_string()) {
        throw Error(Errc::InvalidField, "key \"ai_decision\" must be a string")
            .with_field(key)
            .with_line(line_number);
      }
      event.ai_decision = value.get<std::string>();
    } else if (key == "human_decision") {
      if (!value.is_string()) {
        throw Error(Errc::InvalidField,
                    "key \"human_decision\" must be a string")
            .with_field(key)
            .with_line(line_number);
      }
      event.human_decision = value.get<std::string>();
    } else if (key == "reviewed_async") {
      if (!value.is_boolean()) {
        throw Error(Errc::InvalidField,
                    "key \"reviewed_async\" must be a boolean")
            .with_field(key)
            .with_line(line_number);
      }
      event.reviewed_async = value.get<bool>();
    } else if (key == "human_role") {
      if (!value.is_string()) {
        throw Error(Errc::InvalidField, "key \"human_role\" must be a string")
            .with_field(key)
            .with_line(line_number);
      }
      auto role = parse_role_token(value.get<std::string>());
      if (!role) {
        throw Error(Errc::InvalidEnum,
                    "unknown human_role token \"" + value.get<std::string>() +
                        "\"")
            .with_field(key)
            .with_line(line_number);
      }
      event.human_role = *role;
    } else {
      event.extra[key] = value.dump();
    }
  }

  try {
    validate_event(event);
  } catch (Error& e) {
    throw e.with_line(line_number);
  }
  return event;
}

std::string serialize_event(const DecisionEvent& event) {
  validate_event(event);
  json obj;
  obj["task_id"] = event.task_id;
  obj["timestamp"] = event.timestamp;
  obj["decider"] = decider_token(event.decider);
  obj["phase"] = phase_token(event.phase);
  obj["reviewed_async"] = event.reviewed_async;
  if (event.ai_confidence) obj["ai_confidence"] = *event.ai_confidence;
  if (event.ai_decision) obj["ai_decision"] = *event.ai_decision;
  if (event.human_decision) obj["human_decision"] = *event.human_decision;
  if (event.human_role) obj["human_role"] = role_token(*event.human_role);
  for (const auto& [key, raw] : event.extra) {
    if (is_known_key(key)) {
      throw Error(Errc::InvalidField,
                  "extra key \"" + key + "\" collides with a required key")
          .with_field(key);
    }
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) {
      throw Error(Errc::InvalidField,
                  "extra key \"" + key + "\" holds malformed JSON")
          .with_field(key);
    }
    obj[key] = std::move(value);
  }
  return obj.dump();
}

BatchParse parse_event_lines(std::string_view text) {
  BatchParse out;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    if (pos == text.size() && line_number > 0) break;
    std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool blank = true;
    for (char c : line) {
      if (c != ' ' && c != '\t') {
        blank = false;
        break;
      }
    }
    if (blank) {
      if (eol == std::string_view::npos) break;
      continue;
    }
    ++out.line_count;
    try {
      out.events.push_back(parse_event_line(line, line_number));
    } catch (const Error& e) {
      out.rejected.push_back({e.line().value_or(line_number), e.code(),
                              e.field().value_or(""), e.what()});
    }
    if (eol == std::string_view::npos) break;
  }
  return out;
}

std::vector<DecisionEvent> parse_event_log(std::string_view text) {
  BatchParse batch = parse_event_lines(text);
  if (!batch.rejected.empty()) {
    const LineRejection& r = batch.rejected.front();
    Error err(r.code, r.message);
    err.with_line(r.line);
    if (!r.field.empty()) err.with_field(r.field);
    throw err;
  }
  return std::move(batch.events);
}

std::string serialize_events(std::span<const DecisionEvent> events) {
  std::string out;
  for (const auto& e : events) {
    out += serialize_event(e);
    out += '\n';
  }
  return out;
}

}  // namespace afhe
