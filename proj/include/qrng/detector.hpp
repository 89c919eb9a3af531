#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrng/timetag_io.hpp"

namespace qrng::detector {

struct DetectorParams {
  double efficiency = 1.0;
  double dead_time_s = 24e-9;
  double dark_rate_hz = 0.0;
  double afterpulse_prob = 0.0;
  double afterpulse_delay_s = 100e-9;
  double tick_resolution_s = 25e-12;

  void validate() const;  // throws std::domain_error
};

enum class Origin : std::uint8_t { Signal, Dark, Afterpulse };

struct DetectionEvent {
  double time_s = 0.0;
  std::uint8_t channel = 0;  // 0 or 1
  Origin origin = Origin::Signal;

  bool operator==(const DetectionEvent&) const = default;
};

/// Non-paralyzable dead time with independent per-channel clocks: an event is
/// kept iff it falls at least dead_time after the last kept event on the same
/// channel. Input must be time-ordered.
std::vector<DetectionEvent> apply_dead_time(
    std::span<const DetectionEvent> events, double dead_time_s);

/// Homogeneous Poisson dark counts on [0, duration) for one channel.
std::vector<DetectionEvent> add_dark_counts(double duration_s,
                                            double dark_rate_hz,
                                            std::uint8_t channel,
                                            std::uint64_t seed);

/// Single-generation afterpulsing: each Signal/Dark event independently spawns
/// one extra same-channel event at +delay plus exponential jitter of mean
/// delay/4, with the given probability. Output is re-sorted by time.
std::vector<DetectionEvent> add_afterpulses(
    std::span<const DetectionEvent> events, double afterpulse_prob,
    double afterpulse_delay_s, std::uint64_t seed);

/// Bernoulli thinning by detection efficiency.
std::vector<DetectionEvent> thin_by_efficiency(
    std::span<const DetectionEvent> events, double efficiency,
    std::uint64_t seed);

/// Merges two time-ordered streams; ties resolve to channel 0 first.
std::vector<DetectionEvent> merge_by_time(std::span<const DetectionEvent> a,
                                          std::span<const DetectionEvent> b);

/// Timestamps floored to integer tick counts; ties keep input order.
/// Throws std::range_error if a timestamp overflows the 64-bit tick counter.
std::vector<timetag::TimeTagRecord> quantize(
    std::span<const DetectionEvent> events, double tick_resolution_s);

}  // namespace qrng::detector
