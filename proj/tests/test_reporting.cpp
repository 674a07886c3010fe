#include <doctest.h>
#include <json.hpp>

#include "afhe/reporting.hpp"
#include "test_support.hpp"

using namespace afhe;
using nlohmann::json;
using test::make_event;

namespace {

DecisionEvent tagged(HumanRole role, TimestampMs ts) {
  auto e = make_event(Decider::AiWithSyncHuman, ts);
  e.human_role = role;
  return e;
}

}  // namespace

TEST_CASE("labor report counts role tags") {
  SUBCASE("90 substitution + 10 strategic tuning") {
    std::vector<DecisionEvent> events;
    for (int i = 0; i < 90; ++i)
      events.push_back(tagged(HumanRole::Substitution, i));
    for (int i = 0; i < 10; ++i)
      events.push_back(tagged(HumanRole::StrategicTuning, 90 + i));
    const LaborAllocation labor = labor_report(events);
    CHECK(labor.tagged_count == 100);
    CHECK(labor.proportions[0] == 0.9);
    CHECK(labor.proportions[3] == 0.1);
    CHECK(labor.proportions[1] == 0.0);
    CHECK(labor.coverage == 1.0);
    double sum = 0;
    for (double p : labor.proportions) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("untagged logs report zero coverage") {
    std::vector<DecisionEvent> events;
    for (int i = 0; i < 10; ++i)
      events.push_back(make_event(Decider::HumanOnly, i));
    events.push_back(make_event(Decider::AiAlone, 10));
    const LaborAllocation labor = labor_report(events);
    CHECK(labor.tagged_count == 0);
    CHECK(labor.coverage == 0.0);
    CHECK(labor.untagged_human_count == 10);
    for (double p : labor.proportions) CHECK(p == 0.0);
  }
  SUBCASE("mixed empowered roles") {
    std::vector<DecisionEvent> events{
        tagged(HumanRole::EthicalOversight, 0),
        tagged(HumanRole::EthicalOversight, 1),
        tagged(HumanRole::BoundaryPush, 2),
        tagged(HumanRole::StrategicTuning, 3),
    };
    const LaborAllocation labor = labor_report(events);
    CHECK(labor.proportions[0] == 0.0);
    CHECK(labor.proportions[1] == 0.5);
    CHECK(labor.proportions[2] == 0.25);
    CHECK(labor.proportions[3] == 0.25);
  }
  SUBCASE("tagged and untagged human work are kept apart") {
    std::vector<DecisionEvent> events{
        tagged(HumanRole::BoundaryPush, 0),
        make_event(Decider::HumanOnly, 1),
        make_event(Decider::AiAlone, 2),
    };
    const LaborAllocation labor = labor_report(events);
    CHECK(labor.tagged_count == 1);
    CHECK(labor.untagged_human_count == 1);
    CHECK(labor.coverage == 0.5);
  }
}

TEST_CASE("report document derives every section from the same log") {
  auto events = test::counted_events(38, 100);
  events[40].human_role = HumanRole::Substitution;
  const CostModel model{1.0, 30.0, 0.0, 2.0};
  const ReportDocument doc = build_report(events, model);

  CHECK(doc.event_count == 100);
  CHECK(doc.decider_counts[0] == 38);
  CHECK(doc.alpha.alpha == 0.38);
  CHECK(doc.regime.regime == Regime::Hisoai);
  REQUIRE(doc.cost.has_value());
  CHECK(doc.cost->total == doctest::Approx(100 * 19.6).epsilon(1e-12));
  CHECK(doc.cost->human_share == doctest::Approx(18.6 / 19.6).epsilon(1e-12));
  CHECK(doc.labor.tagged_count == 1);

  const json machine = json::parse(render_report_machine(doc));
  CHECK(machine.at("alpha").at("alpha") == 0.38);
  CHECK(machine.at("regime").at("regime") == "hisoai");
  CHECK(machine.at("cost").at("human_cost_share").get<double>() ==
        doctest::Approx(18.6 / 19.6));
  CHECK(machine.at("decider_counts").at("ai_alone") == 38);

  const std::string text = render_report_text(doc);
  CHECK(text.find("0.3800") != std::string::npos);
  CHECK(text.find("hisoai") != std::string::npos);
}

TEST_CASE("machine renderings are canonical one-liners") {
  const AlphaEstimate est = make_alpha_estimate(38, 100);
  const std::string line = render_alpha_machine(est);
  CHECK(line.back() == '\n');
  CHECK(line.find('\n') == line.size() - 1);
  const json j = json::parse(line);
  CHECK(j.at("ai_alone_count") == 38);
  CHECK(j.at("total_count") == 100);
  CHECK(j.at("alpha") == 0.38);
  // alphabetical key order is part of the contract
  CHECK(line.find("ai_alone_count") < line.find("alpha"));
  CHECK(line.find("alpha") < line.find("ci_high"));
  CHECK(line.find("ci_high") < line.find("ci_low"));
  CHECK(line.find("ci_low") < line.find("total_count"));

  std::vector<WindowedAlpha> series{{12345, est}};
  const json wj = json::parse(render_windowed_machine(series));
  REQUIRE(wj.at("windows").size() == 1);
  CHECK(wj.at("windows")[0].at("window_start") == 12345);
  CHECK(wj.at("windows")[0].at("alpha") == 0.38);
}
