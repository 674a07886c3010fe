#include "afhe/event_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "afhe/event_ingest.hpp"

namespace afhe {

namespace {

using nlohmann::json;

constexpr const char* kManifestName = "manifest.json";
constexpr const char* kManifestTmpName = "manifest.json.tmp";

[[noreturn]] void io_fail(const std::string& what) {
  throw Error(Errc::IoError, what + ": " + std::strerror(errno));
}

// RAII fd wrapper; only the paths that must reach the disk use it.
class Fd {
 public:
  Fd(const std::filesystem::path& path, int flags, mode_t mode = 0644) {
    fd_ = ::open(path.c_str(), flags, mode);
    if (fd_ < 0) io_fail("open " + path.string());
  }
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;

  void write_all(std::string_view data) {
    const char* p = data.data();
    std::size_t left = data.size();
    while (left > 0) {
      ssize_t n = ::write(fd_, p, left);
      if (n < 0) {
        if (errno == EINTR) continue;
        io_fail("write");
      }
      p += n;
      left -= static_cast<std::size_t>(n);
    }
  }

  void sync() {
    if (::fsync(fd_) != 0) io_fail("fsync");
  }

 private:
  int fd_ = -1;
};

void fsync_dir(const std::filesystem::path& dir) {
  Fd fd(dir, O_RDONLY | O_DIRECTORY);
  fd.sync();
}

json segment_to_json(const SegmentInfo& s) {
  json j;
  j["bytes"] = s.bytes;
  j["count"] = s.count;
  j["file"] = s.file;
  j["max_timestamp"] = s.max_timestamp;
  j["min_timestamp"] = s.min_timestamp;
  j["sealed"] = s.sealed;
  return j;
}

SegmentInfo segment_from_json(const json& j) {
  SegmentInfo s;
  s.file = j.at("file").get<std::string>();
  s.count = j.at("count").get<std::uint64_t>();
  s.bytes = j.at("bytes").get<std::uint64_t>();
  s.min_timestamp = j.at("min_timestamp").get<TimestampMs>();
  s.max_timestamp = j.at("max_timestamp").get<TimestampMs>();
  s.sealed = j.at("sealed").get<bool>();
  return s;
}

std::string manifest_to_text(const StoreManifest& m) {
  json j;
  j["format_version"] = m.format_version;
  j["manifest_version"] = m.manifest_version;
  j["recent_keys"] = m.recent_keys;
  json segs = json::array();
  for (const auto& s : m.segments) segs.push_back(segment_to_json(s));
  j["segments"] = std::move(segs);
  return j.dump() + "\n";
}

StoreManifest load_manifest(const std::filesystem::path& dir) {
  const auto path = dir / kManifestName;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoError, "cannot open manifest " + path.string());
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::CorruptSegment, "manifest is not valid JSON: " + path.string());
  }
  StoreManifest m;
  try {
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != 1) {
      throw Error(Errc::InvalidConfig,
                  "unsupported manifest format_version " +
                      std::to_string(m.format_version));
    }
    m.manifest_version = j.at("manifest_version").get<std::uint64_t>();
    if (auto it = j.find("recent_keys"); it != j.end()) {
      m.recent_keys = it->get<std::vector<std::string>>();
    }
    for (const auto& seg : j.at("segments")) {
      m.segments.push_back(segment_from_json(seg));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptSegment,
                std::string("malformed manifest: ") + e.what());
  }
  return m;
}

void store_manifest_atomic(const std::filesystem::path& dir,
                           const StoreManifest& m) {
  const auto tmp = dir / kManifestTmpName;
  {
    Fd fd(tmp, O_WRONLY | O_CREAT | O_TRUNC);
    fd.write_all(manifest_to_text(m));
    fd.sync();
  }
  std::error_code ec;
  std::filesystem::rename(tmp, dir / kManifestName, ec);
  if (ec) {
    throw Error(Errc::IoError, "rename manifest: " + ec.message());
  }
  fsync_dir(dir);
}

std::string segment_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "segment-%06zu.log", index);
  return buf;
}

// Committed window of a segment file, as raw text.
std::string read_segment_window(const std::filesystem::path& path,
                                const SegmentInfo& seg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::CorruptSegment, "missing segment " + seg.file);
  }
  std::string text(seg.bytes, '\0');
  in.read(text.data(), static_cast<std::streamsize>(seg.bytes));
  if (static_cast<std::uint64_t>(in.gcount()) != seg.bytes) {
    throw Error(Errc::CorruptSegment,
                "segment " + seg.file + " shorter than committed length");
  }
  return text;
}

}  // namespace

EventStore::EventStore(std::filesystem::path dir, bool create_if_missing,
                       std::uint64_t segment_capacity)
    : dir_(std::move(dir)), segment_capacity_(segment_capacity) {
  if (segment_capacity_ == 0) {
    throw Error(Errc::InvalidConfig, "segment capacity must be positive");
  }
  const bool have_manifest = std::filesystem::exists(dir_ / kManifestName);
  if (!have_manifest) {
    if (!create_if_missing) {
      throw Error(Errc::IoError,
                  "no event store at " + dir_.string() + " (missing manifest)");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) {
      throw Error(Errc::IoError, "create " + dir_.string() + ": " + ec.message());
    }
    store_manifest_atomic(dir_, StoreManifest{});
  } else {
    load_manifest(dir_);  // fail fast on unreadable or foreign manifests
  }
}

AppendReceipt EventStore::append(
    std::span<const DecisionEvent> events,
    const std::optional<std::string>& idempotency_key) {
  StoreManifest m = load_manifest(dir_);

  if (idempotency_key) {
    if (std::find(m.recent_keys.begin(), m.recent_keys.end(),
                  *idempotency_key) != m.recent_keys.end()) {
      return {0, m.manifest_version, true};
    }
  }
  if (events.empty()) {
    return {0, m.manifest_version, false};
  }

  // Serialize (and thereby validate) everything before touching any file so
  // a bad record cannot leave a half-written batch.
  std::vector<std::string> lines;
  lines.reserve(events.size());
  for (const auto& e : events) lines.push_back(serialize_event(e));

  std::size_t next = 0;
  while (next < lines.size()) {
    if (m.segments.empty() || m.segments.back().sealed) {
      SegmentInfo seg;
      seg.file = segment_name(m.segments.size() + 1);
      m.segments.push_back(seg);
    }
    SegmentInfo& seg = m.segments.back();
    const std::uint64_t room = segment_capacity_ - seg.count;
    const std::size_t take =
        std::min<std::size_t>(room, lines.size() - next);

    const auto path = dir_ / seg.file;
    std::error_code ec;
    // Drop any uncommitted tail left behind by a torn write before the
    // previous manifest swap, then append after the committed prefix.
    const std::uint64_t actual = std::filesystem::exists(path)
                                     ? std::filesystem::file_size(path, ec)
                                     : 0;
    if (ec) {
      throw Error(Errc::IoError, "stat " + path.string() + ": " + ec.message());
    }
    if (actual < seg.bytes) {
      throw Error(Errc::CorruptSegment,
                  "segment " + seg.file + " shorter than committed length");
    }
    if (actual > seg.bytes) {
      std::filesystem::resize_file(path, seg.bytes, ec);
      if (ec) {
        throw Error(Errc::IoError, "truncate " + path.string() + ": " + ec.message());
      }
    }

    std::string chunk;
    for (std::size_t i = next; i < next + take; ++i) {
      chunk += lines[i];
      chunk += '\n';
    }
    {
      Fd fd(path, O_WRONLY | O_APPEND | O_CREAT);
      fd.write_all(chunk);
      fd.sync();
    }

    for (std::size_t i = next; i < next + take; ++i) {
      const TimestampMs ts = events[i].timestamp;
      if (seg.count == 0) {
        seg.min_timestamp = ts;
        seg.max_timestamp = ts;
      } else {
        seg.min_timestamp = std::min(seg.min_timestamp, ts);
        seg.max_timestamp = std::max(seg.max_timestamp, ts);
      }
      ++seg.count;
    }
    seg.bytes += chunk.size();
    if (seg.count >= segment_capacity_) seg.sealed = true;
    next += take;
  }

  if (idempotency_key) {
    m.recent_keys.push_back(*idempotency_key);
    if (m.recent_keys.size() > kDedupHorizon) {
      m.recent_keys.erase(m.recent_keys.begin(),
                          m.recent_keys.begin() +
                              static_cast<std::ptrdiff_t>(
                                  m.recent_keys.size() - kDedupHorizon));
    }
  }
  ++m.manifest_version;
  store_manifest_atomic(dir_, m);
  return {events.size(), m.manifest_version, false};
}

std::vector<DecisionEvent> EventStore::read(const EventFilter& filter) const {
  StoreManifest m = load_manifest(dir_);
  std::vector<DecisionEvent> out;
  for (const auto& seg : m.segments) {
    if (seg.count == 0) continue;
    if (filter.min_timestamp && seg.max_timestamp < *filter.min_timestamp) {
      continue;
    }
    if (filter.max_timestamp && seg.min_timestamp > *filter.max_timestamp) {
      continue;
    }
    const std::string text = read_segment_window(dir_ / seg.file, seg);
    BatchParse batch = parse_event_lines(text);
    if (!batch.rejected.empty() || batch.events.size() != seg.count) {
      throw Error(Errc::CorruptSegment,
                  "segment " + seg.file + " does not match its manifest entry");
    }
    for (auto& e : batch.events) {
      if (filter.phase && e.phase != *filter.phase) continue;
      if (filter.decider && e.decider != *filter.decider) continue;
      if (filter.min_timestamp && e.timestamp < *filter.min_timestamp) continue;
      if (filter.max_timestamp && e.timestamp > *filter.max_timestamp) continue;
      out.push_back(std::move(e));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const DecisionEvent& a, const DecisionEvent& b) {
                     return a.timestamp < b.timestamp;
                   });
  return out;
}

void EventStore::seal_active() {
  StoreManifest m = load_manifest(dir_);
  if (m.segments.empty() || m.segments.back().sealed) return;
  m.segments.back().sealed = true;
  ++m.manifest_version;
  store_manifest_atomic(dir_, m);
}

StoreManifest EventStore::manifest() const { return load_manifest(dir_); }

std::uint64_t EventStore::total_events() const {
  std::uint64_t total = 0;
  for (const auto& seg : load_manifest(dir_).segments) total += seg.count;
  return total;
}

}  // namespace afhe
