#include "afhe/core_metrics.hpp"

#include <algorithm>
#include <cmath>

namespace afhe {

namespace {

// 97.5th percentile of the standard normal, for the two-sided 95% interval.
constexpr double kZ95 = 1.959963984540054;

void validate_cost_model(const CostModel& m) {
  const bool costs_ok = m.tau_a >= 0.0 && m.tau_h >= 0.0 &&
                        m.tau_review_a >= 0.0 && std::isfinite(m.tau_a) &&
                        std::isfinite(m.tau_h) && std::isfinite(m.tau_review_a);
  const bool gamma_ok = m.gamma >= 0.0 && m.gamma <= 1.0;
  if (!costs_ok || !gamma_ok) {
    throw Error(Errc::InvalidConfig,
                "cost model requires non-negative costs and gamma in [0,1]");
  }
}

double per_task_cost(const CostModel& m, double alpha) {
  return alpha * (m.tau_a + m.gamma * m.tau_review_a) +
         (1.0 - alpha) * (m.tau_a + m.tau_h);
}

}  // namespace

void wilson_interval(std::uint64_t k, std::uint64_t n, double& low,
                     double& high) {
  if (n == 0 || k > n) {
    throw Error(Errc::DomainError, "wilson_interval requires 0 <= k <= n, n >= 1");
  }
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double halfwidth =
      (kZ95 / denom) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  low = std::clamp(center - halfwidth, 0.0, 1.0);
  high = std::clamp(center + halfwidth, 0.0, 1.0);
  // Guard against rounding pushing a bound past the point estimate.
  low = std::min(low, p);
  high = std::max(high, p);
}

AlphaEstimate make_alpha_estimate(std::uint64_t ai_alone_count,
                                  std::uint64_t total_count) {
  if (total_count == 0) {
    throw Error(Errc::EmptyLog, "alpha is undefined for zero decisions");
  }
  if (ai_alone_count > total_count) {
    throw Error(Errc::DomainError, "ai_alone_count exceeds total_count");
  }
  AlphaEstimate est;
  est.ai_alone_count = ai_alone_count;
  est.total_count = total_count;
  est.alpha =
      static_cast<double>(ai_alone_count) / static_cast<double>(total_count);
  wilson_interval(ai_alone_count, total_count, est.ci_low, est.ci_high);
  return est;
}

AlphaEstimate compute_alpha(std::span<const DecisionEvent> events) {
  if (events.empty()) {
    throw Error(Errc::EmptyLog, "alpha is undefined for an empty event log");
  }
  std::uint64_t ai_alone = 0;
  for (const auto& e : events) {
    if (e.decider == Decider::AiAlone) ++ai_alone;
  }
  return make_alpha_estimate(ai_alone, events.size());
}

std::vector<WindowedAlpha> compute_alpha_windowed(
    std::span<const DecisionEvent> events, const WindowSpec& spec) {
  if (spec.window <= 0 || spec.stride <= 0) {
    throw Error(Errc::InvalidWindow, "window and stride must be positive");
  }
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].timestamp < events[i - 1].timestamp) {
      throw Error(Errc::UnsortedEvents,
                  "events must be sorted by timestamp for windowing");
    }
  }
  std::vector<WindowedAlpha> series;
  if (events.empty()) return series;

  if (spec.unit == WindowUnit::Events) {
    const std::int64_t n = static_cast<std::int64_t>(events.size());
    for (std::int64_t begin = 0; begin < n; begin += spec.stride) {
      const std::int64_t end = std::min(begin + spec.window, n);
      std::uint64_t ai_alone = 0;
      for (std::int64_t i = begin; i < end; ++i) {
        if (events[i].decider == Decider::AiAlone) ++ai_alone;
      }
      series.push_back(
          {events[begin].timestamp,
           make_alpha_estimate(ai_alone, static_cast<std::uint64_t>(end - begin))});
    }
    return series;
  }

  const TimestampMs first = events.front().timestamp;
  const TimestampMs last = events.back().timestamp;
  std::size_t lo = 0;  // first event with timestamp >= window start
  for (TimestampMs start = first; start <= last; start += spec.stride) {
    while (lo < events.size() && events[lo].timestamp < start) ++lo;
    std::uint64_t ai_alone = 0;
    std::uint64_t count = 0;
    for (std::size_t i = lo;
         i < events.size() && events[i].timestamp < start + spec.window; ++i) {
      ++count;
      if (events[i].decider == Decider::AiAlone) ++ai_alone;
    }
    if (count > 0) {
      series.push_back({start, make_alpha_estimate(ai_alone, count)});
    }
  }
  return series;
}

double total_cost(const CostModel& model, double alpha, std::uint64_t n) {
  validate_cost_model(model);
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(Errc::DomainError, "alpha must lie in [0,1]");
  }
  if (n == 0) {
    throw Error(Errc::DomainError, "task count must be positive");
  }
  return static_cast<double>(n) * per_task_cost(model, alpha);
}

double event_path_cost(const CostModel& model, const DecisionEvent& event) {
  validate_cost_model(model);
  if (event.decider == Decider::AiAlone) {
    return model.tau_a + model.gamma * model.tau_review_a;
  }
  return model.tau_a + model.tau_h;
}

double human_cost_share(const CostModel& model, double alpha) {
  validate_cost_model(model);
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(Errc::DomainError, "alpha must lie in [0,1]");
  }
  const double denom = per_task_cost(model, alpha);
  if (denom <= 0.0) {
    throw Error(Errc::DegenerateCost,
                "per-task cost is zero; human share is undefined");
  }
  return (1.0 - alpha) * model.tau_h / denom;
}

RegimeClassification classify_regime(double alpha, double hisoai_threshold,
                                     double ideal_floor) {
  if (!(hisoai_threshold >= 0.0 && hisoai_threshold <= ideal_floor &&
        ideal_floor <= 1.0)) {
    throw Error(Errc::InvalidThresholds,
                "require 0 <= hisoai_threshold <= ideal_floor <= 1");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(Errc::DomainError, "alpha must lie in [0,1]");
  }
  RegimeClassification out;
  out.alpha = alpha;
  out.hisoai_threshold = hisoai_threshold;
  out.ideal_floor = ideal_floor;
  if (alpha < hisoai_threshold) {
    out.regime = Regime::Hisoai;
  } else if (alpha > ideal_floor) {
    out.regime = Regime::IdealHitl;
  } else {
    out.regime = Regime::Transitional;
  }
  return out;
}

std::string_view regime_token(Regime r) noexcept {
  switch (r) {
    case Regime::Hisoai:
      return "hisoai";
    case Regime::Transitional:
      return "transitional";
    case Regime::IdealHitl:
      return "ideal_hitl";
  }
  return "transitional";
}

}  // namespace afhe
