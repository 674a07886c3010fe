#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afhe/event.hpp"

namespace afhe {

struct SegmentInfo {
  std::string file;
  std::uint64_t count = 0;
  std::uint64_t bytes = 0;  // committed byte length; anything past is tail garbage
  TimestampMs min_timestamp = 0;
  TimestampMs max_timestamp = 0;
  bool sealed = false;
};

struct StoreManifest {
  int format_version = 1;
  std::uint64_t manifest_version = 0;
  std::vector<std::string> recent_keys;  // idempotency dedup horizon, FIFO
  std::vector<SegmentInfo> segments;
};

struct AppendReceipt {
  std::uint64_t appended = 0;
  std::uint64_t manifest_version = 0;
  bool duplicate = false;
};

struct EventFilter {
  std::optional<EventPhase> phase;
  std::optional<Decider> decider;
  std::optional<TimestampMs> min_timestamp;  // inclusive
  std::optional<TimestampMs> max_timestamp;  // inclusive
};

// Append-only store: immutable-once-sealed segment files plus a manifest
// that is replaced atomically (write-new-then-rename). The manifest is the
// commit point; bytes past a segment's committed length are invisible to
// readers, so a torn append can never surface. Single writer, any number of
// readers.
class EventStore {
 public:
  static constexpr std::uint64_t kDefaultSegmentCapacity = 100000;
  static constexpr std::size_t kDedupHorizon = 10000;

  explicit EventStore(std::filesystem::path dir, bool create_if_missing = true,
                      std::uint64_t segment_capacity = kDefaultSegmentCapacity);

  // Durable append of the whole batch, committed by one manifest swap.
  // With an idempotency key that is still inside the dedup horizon the call
  // is a no-op and the receipt says duplicate. Errc::IoError leaves the
  // manifest untouched.
  AppendReceipt append(std::span<const DecisionEvent> events,
                       const std::optional<std::string>& idempotency_key =
                           std::nullopt);

  // Timestamp-ordered events matching every filter predicate. Always reads
  // the latest committed manifest.
  std::vector<DecisionEvent> read(const EventFilter& filter = {}) const;

  // Seals the active segment; the next append starts a new one.
  void seal_active();

  StoreManifest manifest() const;
  std::uint64_t total_events() const;
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::uint64_t segment_capacity_;
};

}  // namespace afhe
