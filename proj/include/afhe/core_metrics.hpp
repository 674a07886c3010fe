#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "afhe/event.hpp"

namespace afhe {

// Point estimate of the autonomy coefficient with a 95% Wilson score
// interval. alpha is exactly ai_alone_count / total_count.
struct AlphaEstimate {
  double alpha = 0.0;
  std::uint64_t ai_alone_count = 0;
  std::uint64_t total_count = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Per-decision cost parameters. All costs are abstract non-negative units;
// gamma is the review frequency for AI-alone decisions.
struct CostModel {
  double tau_a = 0.0;
  double tau_h = 0.0;
  double gamma = 0.0;
  double tau_review_a = 0.0;
};

enum class Regime { Hisoai, Transitional, IdealHitl };

struct RegimeClassification {
  Regime regime = Regime::Transitional;
  double alpha = 0.0;
  double hisoai_threshold = 0.5;
  double ideal_floor = 0.8;
};

constexpr double kDefaultHisoaiThreshold = 0.5;
constexpr double kDefaultIdealFloor = 0.8;

// Windows are either a span of milliseconds or a number of events.
enum class WindowUnit { Milliseconds, Events };

struct WindowSpec {
  WindowUnit unit = WindowUnit::Milliseconds;
  std::int64_t window = 0;
  std::int64_t stride = 0;
};

struct WindowedAlpha {
  // Nominal start for time windows; first covered event's timestamp for
  // count windows.
  TimestampMs window_start = 0;
  AlphaEstimate estimate;
};

// 95% Wilson score interval for k successes out of n trials (n >= 1).
// Bounds are the roots of (p_hat - p)^2 = z^2 p (1 - p) / n, clamped
// to [0,1]; they always bracket p_hat.
void wilson_interval(std::uint64_t k, std::uint64_t n, double& low,
                     double& high);

AlphaEstimate make_alpha_estimate(std::uint64_t ai_alone_count,
                                  std::uint64_t total_count);

// Fraction of events decided by the AI alone. Throws Errc::EmptyLog when
// events is empty.
AlphaEstimate compute_alpha(std::span<const DecisionEvent> events);

// Rolling alpha over [start, start + window) windows advancing by stride.
// Events must be sorted by timestamp (Errc::UnsortedEvents otherwise);
// window and stride must be positive (Errc::InvalidWindow). Windows with no
// events are omitted. A single window covering every event reproduces
// compute_alpha exactly.
std::vector<WindowedAlpha> compute_alpha_windowed(
    std::span<const DecisionEvent> events, const WindowSpec& spec);

// N * [ alpha * (tau_a + gamma * tau_review_a)
//       + (1 - alpha) * (tau_a + tau_h) ].
// Throws Errc::DomainError when alpha is outside [0,1] or n < 1, and
// Errc::InvalidConfig for a malformed model.
double total_cost(const CostModel& model, double alpha, std::uint64_t n);

// Per-decision cost of the path the event actually took: AI-alone decisions
// amortize review as gamma * tau_review_a; human-involved decisions cost
// tau_a + tau_h. Summing this over a log equals total_cost at the log's
// empirical alpha.
double event_path_cost(const CostModel& model, const DecisionEvent& event);

// Fraction of total cost attributable to synchronous human labor,
// (1 - alpha) * tau_h / per-task total. Independent of N. Throws
// Errc::DegenerateCost when the per-task total is zero.
double human_cost_share(const CostModel& model, double alpha);

// Strict inequalities on both sides: alpha < hisoai_threshold is Hisoai,
// alpha > ideal_floor is IdealHitl, boundaries fall in Transitional.
// Requires 0 <= hisoai_threshold <= ideal_floor <= 1
// (Errc::InvalidThresholds).
RegimeClassification classify_regime(
    double alpha, double hisoai_threshold = kDefaultHisoaiThreshold,
    double ideal_floor = kDefaultIdealFloor);

std::string_view regime_token(Regime r) noexcept;

}  // namespace afhe
