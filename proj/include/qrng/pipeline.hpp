#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "json.hpp"
#include "qrng/config.hpp"
#include "qrng/plasmonic_channel.hpp"

namespace qrng {

struct SimulationSummary {
  std::uint64_t record_count = 0;
  std::array<std::uint64_t, 2> per_channel_counts{};
  double duration_s = 0.0;
  double achieved_rate_hz = 0.0;
  std::array<double, 2> achieved_channel_rates_hz{};
  double input_photon_rate_hz = 0.0;
  channel::BranchRates branch;
  channel::RegimeReport regime;
};

/// Full source -> channel -> detector composition, streamed to a QTTAG001
/// file with bounded memory. The surviving branch streams are sampled
/// directly at their thinned Poisson rates (exact by Poisson thinning), then
/// pushed through the per-channel detector chain: dead-time filter,
/// afterpulse spawning from kept events, tick quantization. Child RNG streams
/// are derived from the master seed per (role, channel), so runs are
/// reproducible bit for bit.
///
/// Writes `<out>.meta.json` beside the record file. A failed operating-regime
/// check is reported in the metadata and on stderr, not an abort.
SimulationSummary simulate_to_file(const PipelineConfig& config,
                                   const std::filesystem::path& out_qttag);

nlohmann::json summary_to_json(const SimulationSummary& summary,
                               const PipelineConfig& config);

}  // namespace qrng
