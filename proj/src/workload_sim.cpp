#include "afhe/workload_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "afhe/rng.hpp"

namespace afhe {

namespace {

using nlohmann::json;

// Stream ids keep independent draws independent; never renumber, or every
// frozen fixture value changes.
namespace stream {
constexpr std::uint64_t kAutonomy = 1;
constexpr std::uint64_t kConfidence = 2;
constexpr std::uint64_t kDeciderSplit = 4;
constexpr std::uint64_t kReview = 5;
constexpr std::uint64_t kDisagree = 6;
constexpr std::uint64_t kAiChoice = 7;
constexpr std::uint64_t kHumanChoice = 8;
}  // namespace stream

constexpr double kInvGolden = 0.6180339887498949;  // 1/phi
constexpr int kChoiceCount = 8;

bool fraction_ok(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

std::string task_id_for(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "task-%08llu",
                static_cast<unsigned long long>(index + 1));
  return buf;
}

std::string choice_token(std::uint64_t bits) {
  return "opt-" + std::to_string(bits % kChoiceCount);
}

std::string other_choice_token(std::uint64_t base_bits,
                               std::uint64_t shift_bits) {
  // A token guaranteed to differ from choice_token(base_bits).
  const std::uint64_t base = base_bits % kChoiceCount;
  const std::uint64_t offset = 1 + shift_bits % (kChoiceCount - 1);
  return "opt-" + std::to_string((base + offset) % kChoiceCount);
}

double sample_confidence(const ConfidenceDist& dist, std::uint64_t seed,
                         std::uint64_t index) {
  if (dist.spread == 0.0) return dist.mean;
  const double z = rng::normal(seed, stream::kConfidence, index);
  return std::clamp(dist.mean + dist.spread * z, 0.0, 1.0);
}

// Low-discrepancy quota assignment over the golden-ratio Weyl sequence:
// realized role shares track the weights to within O(log n / n), and a
// zero-weight role is never chosen. Pure function of the human-event
// ordinal, so range-parallel generation stays reproducible.
std::optional<HumanRole> assign_role(const std::array<double, 4>& weights,
                                     std::uint64_t human_ordinal) {
  const double total = weights[0] + weights[1] + weights[2] + weights[3];
  if (total <= 0.0) return std::nullopt;
  const double point =
      static_cast<double>(human_ordinal + 1) * kInvGolden;
  const double x = (point - std::floor(point)) * total;
  double cumulative = 0.0;
  for (int r = 0; r < 4; ++r) {
    cumulative += weights[r];
    if (x < cumulative && weights[r] > 0.0) {
      return static_cast<HumanRole>(r);
    }
  }
  for (int r = 3; r >= 0; --r) {
    if (weights[r] > 0.0) return static_cast<HumanRole>(r);
  }
  return std::nullopt;
}

void check_dist(const ConfidenceDist& d, const char* name) {
  if (!fraction_ok(d.mean) || !(d.spread >= 0.0) || !std::isfinite(d.spread)) {
    throw Error(Errc::InvalidConfig,
                std::string(name) + " needs mean in [0,1] and spread >= 0");
  }
}

json dist_to_json(const ConfidenceDist& d) {
  return json{{"mean", d.mean}, {"spread", d.spread}};
}

ConfidenceDist dist_from_json(const json& j) {
  return {j.at("mean").get<double>(), j.at("spread").get<double>()};
}

}  // namespace

void validate_workload_spec(const WorkloadSpec& spec) {
  if (!fraction_ok(spec.ground_truth_autonomy)) {
    throw Error(Errc::InvalidConfig, "ground_truth_autonomy must lie in [0,1]");
  }
  if (!fraction_ok(spec.disagreement_rate)) {
    throw Error(Errc::InvalidConfig, "disagreement_rate must lie in [0,1]");
  }
  check_dist(spec.confidence_given_autonomous, "confidence_given_autonomous");
  check_dist(spec.confidence_given_dependent, "confidence_given_dependent");
  if (spec.n_tasks < 1) {
    throw Error(Errc::InvalidConfig, "n_tasks must be at least 1");
  }
  if (spec.step_ms < 1 || spec.start_timestamp < 0) {
    throw Error(Errc::InvalidConfig,
                "timestamps need start >= 0 and a positive step");
  }
  for (double w : spec.role_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(Errc::InvalidConfig, "role weights must be non-negative");
    }
  }
  double prev = -1.0;
  for (const auto& p : spec.drift) {
    if (!fraction_ok(p.time_fraction) || !fraction_ok(p.autonomy)) {
      throw Error(Errc::InvalidConfig,
                  "drift breakpoints must lie in [0,1] x [0,1]");
    }
    if (p.time_fraction <= prev) {
      throw Error(Errc::InvalidConfig, "drift breakpoints must be time-ordered");
    }
    prev = p.time_fraction;
  }
  // cost model range check shares the metrics-side rules
  total_cost(spec.cost_model, 0.0, 1);
}

double autonomy_at(const WorkloadSpec& spec, std::uint64_t index) {
  if (spec.drift.empty()) return spec.ground_truth_autonomy;
  const double f =
      spec.n_tasks > 1
          ? static_cast<double>(index) / static_cast<double>(spec.n_tasks - 1)
          : 0.0;
  const auto& d = spec.drift;
  if (f <= d.front().time_fraction) return d.front().autonomy;
  if (f >= d.back().time_fraction) return d.back().autonomy;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (f <= d[i].time_fraction) {
      const double span = d[i].time_fraction - d[i - 1].time_fraction;
      const double t = (f - d[i - 1].time_fraction) / span;
      return d[i - 1].autonomy + t * (d[i].autonomy - d[i - 1].autonomy);
    }
  }
  return d.back().autonomy;
}

std::vector<DecisionEvent> simulate_operational(const WorkloadSpec& spec) {
  validate_workload_spec(spec);
  std::vector<DecisionEvent> events;
  events.reserve(spec.n_tasks);
  std::uint64_t human_ordinal = 0;
  for (std::uint64_t i = 0; i < spec.n_tasks; ++i) {
    const double p = autonomy_at(spec, i);
    const bool autonomous =
        rng::unit(rng::draw_u64(spec.seed, stream::kAutonomy, i)) < p;

    DecisionEvent e;
    e.task_id = task_id_for(i);
    e.timestamp = spec.start_timestamp +
                  static_cast<TimestampMs>(i) * spec.step_ms;
    e.phase = EventPhase::Operational;

    if (autonomous) {
      e.decider = Decider::AiAlone;
      e.ai_decision =
          choice_token(rng::draw_u64(spec.seed, stream::kAiChoice, i));
      e.ai_confidence =
          sample_confidence(spec.confidence_given_autonomous, spec.seed, i);
      e.reviewed_async =
          rng::unit(rng::draw_u64(spec.seed, stream::kReview, i)) <
          spec.cost_model.gamma;
    } else {
      const bool synchronous =
          rng::unit(rng::draw_u64(spec.seed, stream::kDeciderSplit, i)) < 0.5;
      const std::string human_choice =
          choice_token(rng::draw_u64(spec.seed, stream::kHumanChoice, i));
      if (synchronous) {
        e.decider = Decider::AiWithSyncHuman;
        e.ai_decision =
            choice_token(rng::draw_u64(spec.seed, stream::kAiChoice, i));
        e.ai_confidence =
            sample_confidence(spec.confidence_given_dependent, spec.seed, i);
      } else {
        e.decider = Decider::HumanOnly;
      }
      e.human_decision = human_choice;
      e.human_role = assign_role(spec.role_weights, human_ordinal);
      ++human_ordinal;
    }
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<ScoredPrediction> simulate_offline(const WorkloadSpec& spec) {
  validate_workload_spec(spec);
  std::vector<ScoredPrediction> predictions;
  predictions.reserve(spec.n_tasks);
  for (std::uint64_t i = 0; i < spec.n_tasks; ++i) {
    const double p = autonomy_at(spec, i);
    const bool autonomous =
        rng::unit(rng::draw_u64(spec.seed, stream::kAutonomy, i)) < p;
    ScoredPrediction pred;
    pred.task_id = task_id_for(i);
    pred.ai_confidence = sample_confidence(
        autonomous ? spec.confidence_given_autonomous
                   : spec.confidence_given_dependent,
        spec.seed, i);
    pred.ai_decision =
        choice_token(rng::draw_u64(spec.seed, stream::kAiChoice, i));
    predictions.push_back(std::move(pred));
  }
  return predictions;
}

std::vector<PairedDecision> simulate_shadow(const WorkloadSpec& spec) {
  validate_workload_spec(spec);
  std::vector<PairedDecision> pairs;
  pairs.reserve(spec.n_tasks);
  for (std::uint64_t i = 0; i < spec.n_tasks; ++i) {
    const bool disagree =
        rng::unit(rng::draw_u64(spec.seed, stream::kDisagree, i)) <
        spec.disagreement_rate;
    const std::uint64_t ai_bits =
        rng::draw_u64(spec.seed, stream::kAiChoice, i);
    PairedDecision pair;
    pair.task_id = task_id_for(i);
    pair.ai_decision = choice_token(ai_bits);
    pair.human_decision =
        disagree ? other_choice_token(
                       ai_bits, rng::draw_u64(spec.seed, stream::kHumanChoice, i))
                 : pair.ai_decision;
    pair.agree = !disagree;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<DecisionEvent> simulate_offline_events(const WorkloadSpec& spec) {
  const auto predictions = simulate_offline(spec);
  std::vector<DecisionEvent> events;
  events.reserve(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    DecisionEvent e;
    e.task_id = predictions[i].task_id;
    e.timestamp = spec.start_timestamp +
                  static_cast<TimestampMs>(i) * spec.step_ms;
    e.phase = EventPhase::Offline;
    e.decider = Decider::AiAlone;
    e.ai_decision = predictions[i].ai_decision;
    e.ai_confidence = predictions[i].ai_confidence;
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<DecisionEvent> simulate_shadow_events(const WorkloadSpec& spec) {
  const auto pairs = simulate_shadow(spec);
  std::vector<DecisionEvent> events;
  events.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    DecisionEvent e;
    e.task_id = pairs[i].task_id;
    e.timestamp = spec.start_timestamp +
                  static_cast<TimestampMs>(i) * spec.step_ms;
    e.phase = EventPhase::Shadow;
    e.decider = Decider::AiWithSyncHuman;
    e.ai_decision = pairs[i].ai_decision;
    e.human_decision = pairs[i].human_decision;
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<std::string> scenario_names() {
  return {"legacy-hisoai", "afhe-iteration-1", "afhe-final"};
}

WorkloadSpec builtin_scenario(std::string_view name) {
  WorkloadSpec spec;
  spec.n_tasks = 10000;
  spec.seed = 42;
  spec.confidence_given_dependent = {0.30, 0.10};

  if (name == "legacy-hisoai") {
    // Legacy system: humans quietly carry most decisions, and nearly all
    // human effort is plain substitution. Costs chosen so the synchronous
    // human share of Eq-style total cost exceeds 0.9 at the fixture alpha.
    spec.ground_truth_autonomy = 0.38;
    spec.disagreement_rate = 0.62;
    spec.confidence_given_autonomous = {0.90, 0.05};
    spec.cost_model = {1.0, 30.0, 0.0, 2.0};
    spec.role_weights = {0.92, 0.02, 0.02, 0.04};
    return spec;
  }
  if (name == "afhe-iteration-1") {
    // First gate attempt of the successor system: still failing the 0.8
    // target with autonomy around 0.45 at theta 0.8.
    spec.ground_truth_autonomy = 0.45;
    spec.disagreement_rate = 0.55;
    spec.confidence_given_autonomous = {0.95, 0.02};
    spec.cost_model = {1.0, 30.0, 0.1, 2.0};
    spec.role_weights = {0.5, 0.15, 0.15, 0.2};
    return spec;
  }
  if (name == "afhe-final") {
    // Cleared system: stable shadow agreement at 0.85 and no substitution
    // labor left.
    spec.ground_truth_autonomy = 0.85;
    spec.disagreement_rate = 0.15;
    spec.confidence_given_autonomous = {0.95, 0.02};
    spec.cost_model = {1.0, 30.0, 0.1, 2.0};
    spec.role_weights = {0.0, 0.3, 0.3, 0.4};
    return spec;
  }
  std::string names;
  for (const auto& n : scenario_names()) {
    if (!names.empty()) names += ", ";
    names += n;
  }
  throw Error(Errc::UnknownScenario, "unknown scenario \"" + std::string(name) +
                                         "\" (available: " + names + ")");
}

WorkloadSpec workload_spec_from_json_text(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::SyntaxError, "workload spec is not a JSON object");
  }
  WorkloadSpec spec;
  try {
    spec.ground_truth_autonomy =
        j.at("ground_truth_autonomy").get<double>();
    if (j.contains("confidence_given_autonomous")) {
      spec.confidence_given_autonomous =
          dist_from_json(j.at("confidence_given_autonomous"));
    }
    if (j.contains("confidence_given_dependent")) {
      spec.confidence_given_dependent =
          dist_from_json(j.at("confidence_given_dependent"));
    }
    spec.disagreement_rate = j.value("disagreement_rate", 0.0);
    if (j.contains("cost_model")) {
      const json& c = j.at("cost_model");
      spec.cost_model.tau_a = c.value("tau_a", 0.0);
      spec.cost_model.tau_h = c.value("tau_h", 0.0);
      spec.cost_model.gamma = c.value("gamma", 0.0);
      spec.cost_model.tau_review_a = c.value("tau_review_a", 0.0);
    }
    spec.n_tasks = j.value("n_tasks", std::uint64_t{1});
    spec.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("drift")) {
      for (const auto& p : j.at("drift")) {
        spec.drift.push_back({p.at("time_fraction").get<double>(),
                              p.at("autonomy").get<double>()});
      }
    }
    if (j.contains("role_weights")) {
      const auto w = j.at("role_weights").get<std::vector<double>>();
      if (w.size() != 4) {
        throw Error(Errc::InvalidConfig, "role_weights needs 4 entries");
      }
      std::copy(w.begin(), w.end(), spec.role_weights.begin());
    }
    spec.start_timestamp =
        j.value("start_timestamp", TimestampMs{1'700'000'000'000});
    spec.step_ms = j.value("step_ms", TimestampMs{1000});
  } catch (const json::exception& e) {
    throw Error(Errc::MissingField,
                std::string("malformed workload spec: ") + e.what());
  }
  validate_workload_spec(spec);
  return spec;
}

std::string workload_spec_to_json_text(const WorkloadSpec& spec) {
  json j;
  j["ground_truth_autonomy"] = spec.ground_truth_autonomy;
  j["confidence_given_autonomous"] =
      dist_to_json(spec.confidence_given_autonomous);
  j["confidence_given_dependent"] =
      dist_to_json(spec.confidence_given_dependent);
  j["disagreement_rate"] = spec.disagreement_rate;
  j["cost_model"] = json{{"gamma", spec.cost_model.gamma},
                         {"tau_a", spec.cost_model.tau_a},
                         {"tau_h", spec.cost_model.tau_h},
                         {"tau_review_a", spec.cost_model.tau_review_a}};
  j["n_tasks"] = spec.n_tasks;
  j["seed"] = spec.seed;
  if (!spec.drift.empty()) {
    json d = json::array();
    for (const auto& p : spec.drift) {
      d.push_back(json{{"autonomy", p.autonomy},
                       {"time_fraction", p.time_fraction}});
    }
    j["drift"] = std::move(d);
  }
  j["role_weights"] = spec.role_weights;
  j["start_timestamp"] = spec.start_timestamp;
  j["step_ms"] = spec.step_ms;
  return j.dump();
}

}  // namespace afhe
