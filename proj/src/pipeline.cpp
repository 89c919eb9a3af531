#include "qrng/pipeline.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <queue>

#include "qrng/rng.hpp"
#include "qrng/timetag_io.hpp"
#include "qrng/version.hpp"

namespace qrng {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Lazily generates the kept detections of one channel in time order:
/// signal and dark candidates from exponential gaps, afterpulse candidates
/// from a pending queue, all pushed through the non-paralyzable dead-time
/// filter. Only kept signal/dark events spawn afterpulses (single
/// generation); a photon missed during dead time triggers no avalanche.
class ChannelEventStream {
 public:
  ChannelEventStream(double signal_rate_hz, const detector::DetectorParams& det,
                     double duration_s, std::uint64_t master_seed,
                     std::uint8_t channel)
      : det_(det),
        duration_s_(duration_s),
        signal_mean_gap_(signal_rate_hz > 0 ? 1.0 / signal_rate_hz : 0.0),
        dark_mean_gap_(det.dark_rate_hz > 0 ? 1.0 / det.dark_rate_hz : 0.0),
        rng_signal_(child_seed(master_seed, "signal", channel)),
        rng_dark_(child_seed(master_seed, "dark", channel)),
        rng_afterpulse_(child_seed(master_seed, "afterpulse", channel)) {
    next_signal_ = signal_rate_hz > 0
                       ? rng_signal_.next_exponential(signal_mean_gap_)
                       : kInf;
    next_dark_ =
        det.dark_rate_hz > 0 ? rng_dark_.next_exponential(dark_mean_gap_) : kInf;
  }

  /// Next kept detection time, or nullopt when the run is exhausted.
  std::optional<double> next() {
    for (;;) {
      double t;
      bool is_afterpulse = false;
      if (!afterpulses_.empty() && afterpulses_.top() <= next_signal_ &&
          afterpulses_.top() <= next_dark_) {
        t = afterpulses_.top();
        afterpulses_.pop();
        is_afterpulse = true;
      } else if (next_signal_ <= next_dark_) {
        t = next_signal_;
        next_signal_ += rng_signal_.next_exponential(signal_mean_gap_);
      } else {
        t = next_dark_;
        next_dark_ += rng_dark_.next_exponential(dark_mean_gap_);
      }
      if (t >= duration_s_) return std::nullopt;
      if (t < last_kept_ + det_.dead_time_s) continue;  // lost to dead time
      last_kept_ = t;
      if (!is_afterpulse && det_.afterpulse_prob > 0 &&
          rng_afterpulse_.next_unit() < det_.afterpulse_prob) {
        afterpulses_.push(t + det_.afterpulse_delay_s +
                          rng_afterpulse_.next_exponential(
                              det_.afterpulse_delay_s / 4.0));
      }
      return t;
    }
  }

 private:
  detector::DetectorParams det_;
  double duration_s_;
  double signal_mean_gap_;
  double dark_mean_gap_;
  Xoshiro256ss rng_signal_;
  Xoshiro256ss rng_dark_;
  Xoshiro256ss rng_afterpulse_;
  double next_signal_ = kInf;
  double next_dark_ = kInf;
  double last_kept_ = -kInf;
  std::priority_queue<double, std::vector<double>, std::greater<>> afterpulses_;
};

}  // namespace

SimulationSummary simulate_to_file(const PipelineConfig& config,
                                   const std::filesystem::path& out_qttag) {
  config.validate();

  const double input_power = source::attenuated_power_w(
      config.source.power_at_reference_w, config.source.transmission_factor);
  const double photon_rate =
      source::photon_rate_hz(input_power, config.source.wavelength_m);
  const auto branch = channel::branch_rates(config.channel, photon_rate);

  // detection efficiency thins each branch stream (exact Poisson thinning)
  const double rate0 = branch.to_output0_hz * config.detector.efficiency;
  const double rate1 = branch.to_output1_hz * config.detector.efficiency;

  SimulationSummary summary;
  summary.duration_s = config.duration_s;
  summary.input_photon_rate_hz = photon_rate;
  summary.branch = branch;

  const double coherence =
      source::coherence_time_s(config.source.linewidth_hz);
  // analytic post-dead-time detection rate of the busier channel
  const double busiest = std::max(rate0 + config.detector.dark_rate_hz,
                                  rate1 + config.detector.dark_rate_hz);
  const double expected_detected =
      busiest / (1.0 + busiest * config.detector.dead_time_s);
  summary.regime = channel::check_operating_regime(
      photon_rate, coherence, expected_detected, config.detector.dead_time_s);
  if (!summary.regime.single_excitation_ok || !summary.regime.dead_time_ok) {
    std::cerr << "warning: operating-regime check failed (excitation ratio "
              << summary.regime.excitation_ratio << ", dead-time ratio "
              << summary.regime.dead_time_ratio << ")\n";
  }

  ChannelEventStream stream0(rate0, config.detector, config.duration_s,
                             config.master_seed, 0);
  ChannelEventStream stream1(rate1, config.detector, config.duration_s,
                             config.master_seed, 1);

  timetag::RecordFileWriter writer(out_qttag);
  const double tick = config.detector.tick_resolution_s;
  auto to_record = [tick](double t, std::uint8_t ch) {
    return timetag::TimeTagRecord{
        static_cast<std::uint64_t>(std::floor(t / tick)), ch};
  };
  auto t0 = stream0.next();
  auto t1 = stream1.next();
  while (t0 || t1) {
    // merge by true (unquantized) time; ties go to channel 0
    if (t0 && (!t1 || *t0 <= *t1)) {
      writer.write(to_record(*t0, 0));
      ++summary.per_channel_counts[0];
      t0 = stream0.next();
    } else {
      writer.write(to_record(*t1, 1));
      ++summary.per_channel_counts[1];
      t1 = stream1.next();
    }
  }
  writer.close();

  summary.record_count =
      summary.per_channel_counts[0] + summary.per_channel_counts[1];
  summary.achieved_rate_hz =
      static_cast<double>(summary.record_count) / config.duration_s;
  summary.achieved_channel_rates_hz = {
      static_cast<double>(summary.per_channel_counts[0]) / config.duration_s,
      static_cast<double>(summary.per_channel_counts[1]) / config.duration_s};

  const auto meta = summary_to_json(summary, config);
  write_file_atomic(out_qttag.string() + ".meta.json", meta.dump(2) + "\n");
  return summary;
}

nlohmann::json summary_to_json(const SimulationSummary& s,
                               const PipelineConfig& config) {
  char hash[19];
  std::snprintf(hash, sizeof hash, "0x%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  return {{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
          {"config_hash", hash},
          {"rng_algorithm", kRngAlgorithmId},
          {"config", to_json(config)},
          {"records", s.record_count},
          {"per_channel_counts", {s.per_channel_counts[0], s.per_channel_counts[1]}},
          {"duration_s", s.duration_s},
          {"achieved_rate_hz", s.achieved_rate_hz},
          {"achieved_channel_rates_hz",
           {s.achieved_channel_rates_hz[0], s.achieved_channel_rates_hz[1]}},
          {"input_photon_rate_hz", s.input_photon_rate_hz},
          {"branch_rates_hz",
           {{"to_output0", s.branch.to_output0_hz},
            {"to_output1", s.branch.to_output1_hz},
            {"lost", s.branch.lost_hz}}},
          {"regime_check",
           {{"excitation_ratio", s.regime.excitation_ratio},
            {"single_excitation_ok", s.regime.single_excitation_ok},
            {"dead_time_ratio", s.regime.dead_time_ratio},
            {"dead_time_ok", s.regime.dead_time_ok}}}};
}

}  // namespace qrng
