#include "qrng/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qrng/photon_source.hpp"
#include "qrng/rng.hpp"

namespace qrng::detector {

void DetectorParams::validate() const {
  if (efficiency < 0 || efficiency > 1)
    throw std::domain_error("efficiency must be in [0,1]");
  if (afterpulse_prob < 0 || afterpulse_prob > 1)
    throw std::domain_error("afterpulse probability must be in [0,1]");
  if (dead_time_s < 0) throw std::domain_error("dead time must be >= 0");
  if (dark_rate_hz < 0) throw std::domain_error("dark rate must be >= 0");
  if (afterpulse_delay_s < 0)
    throw std::domain_error("afterpulse delay must be >= 0");
  if (!(tick_resolution_s > 0))
    throw std::domain_error("tick resolution must be > 0");
}

namespace {
void require_ordered(std::span<const DetectionEvent> events) {
  for (std::size_t i = 1; i < events.size(); ++i)
    if (events[i].time_s < events[i - 1].time_s)
      throw std::domain_error("detector: events must be time-ordered");
}
}  // namespace

std::vector<DetectionEvent> apply_dead_time(
    std::span<const DetectionEvent> events, double dead_time_s) {
  if (dead_time_s < 0) throw std::domain_error("dead time must be >= 0");
  require_ordered(events);
  std::vector<DetectionEvent> kept;
  kept.reserve(events.size());
  double last_kept[2] = {-std::numeric_limits<double>::infinity(),
                         -std::numeric_limits<double>::infinity()};
  for (const auto& ev : events) {
    if (ev.time_s >= last_kept[ev.channel] + dead_time_s) {
      kept.push_back(ev);
      last_kept[ev.channel] = ev.time_s;
    }
  }
  return kept;
}

std::vector<DetectionEvent> add_dark_counts(double duration_s,
                                            double dark_rate_hz,
                                            std::uint8_t channel,
                                            std::uint64_t seed) {
  const auto arrivals =
      source::sample_poisson_arrivals(dark_rate_hz, duration_s, seed);
  std::vector<DetectionEvent> events;
  events.reserve(arrivals.times.size());
  for (double t : arrivals.times)
    events.push_back({t, channel, Origin::Dark});
  return events;
}

std::vector<DetectionEvent> add_afterpulses(
    std::span<const DetectionEvent> events, double afterpulse_prob,
    double afterpulse_delay_s, std::uint64_t seed) {
  if (afterpulse_prob < 0 || afterpulse_prob > 1)
    throw std::domain_error("afterpulse probability must be in [0,1]");
  require_ordered(events);
  std::vector<DetectionEvent> out(events.begin(), events.end());
  if (afterpulse_prob == 0) return out;
  Xoshiro256ss rng(seed);
  for (const auto& ev : events) {
    if (rng.next_unit() < afterpulse_prob) {
      const double jitter = rng.next_exponential(afterpulse_delay_s / 4.0);
      out.push_back({ev.time_s + afterpulse_delay_s + jitter, ev.channel,
                     Origin::Afterpulse});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const DetectionEvent& a, const DetectionEvent& b) {
                     return a.time_s < b.time_s;
                   });
  return out;
}

std::vector<DetectionEvent> thin_by_efficiency(
    std::span<const DetectionEvent> events, double efficiency,
    std::uint64_t seed) {
  if (efficiency < 0 || efficiency > 1)
    throw std::domain_error("efficiency must be in [0,1]");
  if (efficiency == 1.0)
    return std::vector<DetectionEvent>(events.begin(), events.end());
  Xoshiro256ss rng(seed);
  std::vector<DetectionEvent> kept;
  kept.reserve(static_cast<std::size_t>(events.size() * efficiency) + 16);
  for (const auto& ev : events)
    if (rng.next_unit() < efficiency) kept.push_back(ev);
  return kept;
}

std::vector<DetectionEvent> merge_by_time(std::span<const DetectionEvent> a,
                                          std::span<const DetectionEvent> b) {
  std::vector<DetectionEvent> merged;
  merged.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(),
             std::back_inserter(merged),
             [](const DetectionEvent& x, const DetectionEvent& y) {
               if (x.time_s != y.time_s) return x.time_s < y.time_s;
               return x.channel < y.channel;
             });
  return merged;
}

std::vector<timetag::TimeTagRecord> quantize(
    std::span<const DetectionEvent> events, double tick_resolution_s) {
  if (!(tick_resolution_s > 0))
    throw std::domain_error("tick resolution must be > 0");
  require_ordered(events);
  std::vector<timetag::TimeTagRecord> records;
  records.reserve(events.size());
  constexpr double kMaxTicks = 18446744073709549568.0;  // largest double < 2^64
  for (const auto& ev : events) {
    const double ticks = std::floor(ev.time_s / tick_resolution_s);
    if (ticks < 0 || ticks > kMaxTicks)
      throw std::range_error("quantize: tick count overflows 64 bits");
    records.push_back({static_cast<std::uint64_t>(ticks), ev.channel});
  }
  return records;
}

}  // namespace qrng::detector
