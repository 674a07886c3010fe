#include <fstream>

#include <doctest.h>

#include "afhe/core_metrics.hpp"
#include "afhe/event_ingest.hpp"
#include "afhe/event_store.hpp"
#include "test_support.hpp"

using namespace afhe;
using test::counted_events;
using test::make_event;
using test::TempDir;

TEST_CASE("append accumulates and versions the manifest") {
  TempDir dir("store-basic");
  EventStore store(dir.path());
  const auto first = store.append(counted_events(40, 100));
  CHECK(first.appended == 100);
  const auto second = store.append(counted_events(10, 50));
  CHECK(second.appended == 50);
  CHECK(second.manifest_version == first.manifest_version + 1);
  CHECK(store.total_events() == 150);

  const auto empty = store.append({});
  CHECK(empty.appended == 0);
  CHECK(empty.manifest_version == second.manifest_version);
}

TEST_CASE("reads come back in timestamp order across segments") {
  TempDir dir("store-order");
  EventStore store(dir.path(), true, /*segment_capacity=*/4);
  std::vector<DecisionEvent> batch1{
      make_event(Decider::AiAlone, 50, "a"),
      make_event(Decider::HumanOnly, 10, "b"),
      make_event(Decider::AiAlone, 90, "c"),
      make_event(Decider::AiAlone, 20, "d"),
      make_event(Decider::HumanOnly, 70, "e"),
  };
  store.append(batch1);
  store.append({make_event(Decider::AiAlone, 5, "f"),
                make_event(Decider::HumanOnly, 80, "g")});

  const auto events = store.read();
  REQUIRE(events.size() == 7);
  for (std::size_t i = 1; i < events.size(); ++i) {
    CHECK(events[i - 1].timestamp <= events[i].timestamp);
  }
  CHECK(events.front().task_id == "f");
  CHECK(events.back().task_id == "c");
}

TEST_CASE("filters match a brute-force selection") {
  TempDir dir("store-filter");
  EventStore store(dir.path());
  std::vector<DecisionEvent> all;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto e = test::fuzz_event(99, i);
    all.push_back(e);
  }
  store.append(all);

  EventFilter filter;
  filter.phase = EventPhase::Shadow;
  filter.min_timestamp = 200000;
  filter.max_timestamp = 700000;
  const auto got = store.read(filter);

  std::size_t expected = 0;
  for (const auto& e : all) {
    if (e.phase == EventPhase::Shadow && e.timestamp >= 200000 &&
        e.timestamp <= 700000) {
      ++expected;
    }
  }
  CHECK(got.size() == expected);
  for (const auto& e : got) {
    CHECK(e.phase == EventPhase::Shadow);
    CHECK(e.timestamp >= 200000);
    CHECK(e.timestamp <= 700000);
  }

  EventFilter by_decider;
  by_decider.decider = Decider::HumanOnly;
  std::size_t humans = 0;
  for (const auto& e : all) {
    if (e.decider == Decider::HumanOnly) ++humans;
  }
  CHECK(store.read(by_decider).size() == humans);
}

TEST_CASE("segments rotate at capacity and seal") {
  TempDir dir("store-rotate");
  EventStore store(dir.path(), true, 100);
  store.append(counted_events(0, 250));
  const StoreManifest m = store.manifest();
  REQUIRE(m.segments.size() == 3);
  CHECK(m.segments[0].count == 100);
  CHECK(m.segments[0].sealed);
  CHECK(m.segments[1].count == 100);
  CHECK(m.segments[1].sealed);
  CHECK(m.segments[2].count == 50);
  CHECK_FALSE(m.segments[2].sealed);
  CHECK(store.read().size() == 250);

  store.seal_active();
  CHECK(store.manifest().segments[2].sealed);
  store.append(counted_events(1, 1));
  CHECK(store.manifest().segments.size() == 4);
}

TEST_CASE("uncommitted tail bytes are invisible and get truncated") {
  TempDir dir("store-crash");
  EventStore store(dir.path());
  store.append(counted_events(3, 10));

  // Simulate a crash after segment bytes hit the disk but before the
  // manifest rename: garbage (even a torn half-record) past the committed
  // length.
  const StoreManifest m = store.manifest();
  REQUIRE(m.segments.size() == 1);
  {
    std::ofstream seg(dir.path() / m.segments[0].file,
                      std::ios::binary | std::ios::app);
    seg << "{\"task_id\":\"torn";
  }

  CHECK(store.read().size() == 10);  // old manifest, no torn reads

  // The next writer drops the tail before appending.
  const auto receipt = store.append({make_event(Decider::AiAlone, 999, "new")});
  CHECK(receipt.appended == 1);
  const auto events = store.read();
  CHECK(events.size() == 11);
  for (const auto& e : events) CHECK(e.task_id != "torn");
}

TEST_CASE("a segment shorter than its committed length is corrupt") {
  TempDir dir("store-corrupt");
  EventStore store(dir.path());
  store.append(counted_events(3, 10));
  const StoreManifest m = store.manifest();
  std::filesystem::resize_file(dir.path() / m.segments[0].file,
                               m.segments[0].bytes / 2);
  try {
    store.read();
    FAIL("expected CorruptSegment");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CorruptSegment);
    CHECK(std::string(e.what()).find(m.segments[0].file) != std::string::npos);
  }
}

TEST_CASE("idempotency keys suppress duplicate batches") {
  TempDir dir("store-idem");
  EventStore store(dir.path());
  const auto batch = counted_events(5, 20);
  const auto first = store.append(batch, std::string("batch-1"));
  CHECK(first.appended == 20);
  CHECK_FALSE(first.duplicate);

  const auto replay = store.append(batch, std::string("batch-1"));
  CHECK(replay.appended == 0);
  CHECK(replay.duplicate);
  CHECK(replay.manifest_version == first.manifest_version);
  CHECK(store.total_events() == 20);

  const auto fresh = store.append(batch, std::string("batch-2"));
  CHECK(fresh.appended == 20);
  CHECK(store.total_events() == 40);
}

TEST_CASE("storage is metric-transparent") {
  TempDir dir("store-metrics");
  EventStore store(dir.path());
  const auto events = counted_events(123, 321);
  store.append(events);
  const auto direct = compute_alpha(events);
  const auto via_store = compute_alpha(store.read());
  CHECK(direct.alpha == via_store.alpha);
  CHECK(direct.ai_alone_count == via_store.ai_alone_count);
  CHECK(direct.ci_low == via_store.ci_low);
}

TEST_CASE("durability across reopen") {
  TempDir dir("store-durable");
  {
    EventStore store(dir.path());
    store.append(counted_events(7, 12));
  }
  EventStore reopened(dir.path(), /*create_if_missing=*/false);
  CHECK(reopened.read().size() == 12);
}

TEST_CASE("opening a missing store without create fails") {
  TempDir dir("store-missing");
  try {
    EventStore store(dir.path() / "nope", false);
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IoError);
  }
}

TEST_CASE("invalid events poison nothing") {
  TempDir dir("store-validate");
  EventStore store(dir.path());
  store.append(counted_events(1, 3));
  std::vector<DecisionEvent> bad = counted_events(1, 2);
  bad.push_back({});  // empty task_id
  CHECK_THROWS_AS(store.append(bad), Error);
  CHECK(store.total_events() == 3);  // nothing from the failed batch
}
