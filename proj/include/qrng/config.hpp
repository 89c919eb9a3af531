#pragma once

#include <cstdint>
#include <filesystem>

#include "json.hpp"
#include "qrng/detector.hpp"
#include "qrng/extractor.hpp"
#include "qrng/nist/battery.hpp"
#include "qrng/photon_source.hpp"
#include "qrng/plasmonic_channel.hpp"

namespace qrng {

struct PipelineConfig {
  source::SourceParams source;
  channel::ChannelParams channel;
  detector::DetectorParams detector;
  extract::ExtractorConfig extractor;
  nist::BatteryConfig battery;
  double duration_s = 1.0;
  std::uint64_t master_seed = 1;

  void validate() const;
};

/// Reference device profile. The splitting asymmetry and the output survival
/// are calibrated so that the simulated stream reproduces the characterized
/// hardware run: ones fraction 0.5023 and 82,604,923 detections over 34 s.
PipelineConfig default_pipeline_config();

nlohmann::json to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);

/// FNV-1a over the canonical JSON dump; embedded in every emitted report.
std::uint64_t config_hash(const PipelineConfig& config);

}  // namespace qrng
